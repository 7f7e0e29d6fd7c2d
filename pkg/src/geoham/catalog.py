"""Built-in example systems.

The four-dimensional isotropic harmonic oscillator is the workhorse: it
admits two inequivalent Hamiltonian descriptions, an invariant
index-swap tensor generating closed twisted 2-forms, and a globally
defined time 1-form.  The quartic oscillator pairs with the harmonic
one as the standard energy-period counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .expr import Chart, RationalFunction, parse_expression
from .geom import DifferentialForm, Tensor11, VectorField


@dataclass(frozen=True)
class OscillatorR4:
    """Isotropic oscillator on R⁴ with its alternative structures.

    Coordinates are ordered (q1, q2, p1, p2); the frequency is the
    symbolic constant ``omega``.  ``gamma`` is the Hamilton field of
    ``h_primary`` for ``omega_primary`` (q̇ = ωp, ṗ = −ωq), and the same
    field is Hamiltonian for the swapped pair (omega_swapped,
    h_swapped).  ``swap_tensor`` commutes with the flow and together
    with ``quartic_invariant`` produces a closed twisted 2-form;
    ``time_form`` contracts with gamma to the constant 1.
    """

    chart: Chart
    gamma: VectorField
    h_primary: RationalFunction
    h_swapped: RationalFunction
    omega_primary: DifferentialForm
    omega_swapped: DifferentialForm
    swap_tensor: Tensor11
    quartic_invariant: RationalFunction
    time_form: DifferentialForm


def oscillator_r4() -> OscillatorR4:
    """The R⁴ isotropic oscillator fixture with symbolic frequency."""
    chart = Chart(["q1", "q2", "p1", "p2"], constants=["omega"])
    expr = lambda text: parse_expression(text, chart)
    one = chart.one()

    gamma = VectorField(chart, [expr("omega*p1"), expr("omega*p2"),
                                expr("-omega*q1"), expr("-omega*q2")])
    h_primary = expr("1/2*omega*(p1^2 + p2^2 + q1^2 + q2^2)")
    h_swapped = expr("omega*(p1*p2 + q1*q2)")
    # indices: q1=0, q2=1, p1=2, p2=3
    omega_primary = DifferentialForm(chart, 2, {(0, 2): one, (1, 3): one})
    omega_swapped = DifferentialForm(chart, 2, {(0, 3): one, (1, 2): one})

    zero = chart.zero()
    swap_tensor = Tensor11(chart, [
        [zero, one, zero, zero],
        [one, zero, zero, zero],
        [zero, zero, zero, one],
        [zero, zero, one, zero],
    ])
    quartic_invariant = expr("1/4*(p1^2 + p2^2 + q1^2 + q2^2)^2")
    time_form = DifferentialForm(chart, 1, {
        (0,): expr("1/2*p1/(omega*(p1^2+q1^2))"),
        (1,): expr("1/2*p2/(omega*(p2^2+q2^2))"),
        (2,): expr("-1/2*q1/(omega*(p1^2+q1^2))"),
        (3,): expr("-1/2*q2/(omega*(p2^2+q2^2))"),
    })
    return OscillatorR4(
        chart=chart,
        gamma=gamma,
        h_primary=h_primary,
        h_swapped=h_swapped,
        omega_primary=omega_primary,
        omega_swapped=omega_swapped,
        swap_tensor=swap_tensor,
        quartic_invariant=quartic_invariant,
        time_form=time_form,
    )


def planar_chart() -> Chart:
    return Chart(["q", "p"])


def harmonic_hamiltonian(chart: Chart | None = None) -> RationalFunction:
    """H = (p² + q²)/2; constant period 2π."""
    chart = chart or planar_chart()
    return parse_expression("1/2*(p^2 + q^2)", chart)


def quartic_hamiltonian(chart: Chart | None = None) -> RationalFunction:
    """H = (p² + q²)²; period π/(2√E) depends on the energy."""
    chart = chart or planar_chart()
    return parse_expression("(p^2 + q^2)^2", chart)


def oscillator_generator_entries(n: int = 2, omega: Fraction = Fraction(1)):
    """Row-major entries of the linear isotropic-oscillator generator.

    Coordinate order (q₁..qₙ, p₁..pₙ): q̇ = ωp, ṗ = −ωq, i.e. the block
    matrix [[0, ωI], [−ωI, 0]].
    """
    omega = Fraction(omega)
    rows = []
    for i in range(2 * n):
        row = [Fraction(0)] * 2 * n
        if i < n:
            row[i + n] = omega
        else:
            row[i - n] = -omega
        rows.append(row)
    return rows
