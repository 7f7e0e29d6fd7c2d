"""Two inequivalent Hamiltonian descriptions of one flow, plus a third
structure generated from an invariant tensor.

The isotropic oscillator on R^4 is the classic example: the same vector
field is Hamiltonian for the standard symplectic pair (w1, H1) and for
an index-swapped pair (w2, H2).  Any (1,1)-tensor invariant under the
flow then manufactures further closed 2-forms out of first integrals.
"""

from geoham import catalog
from geoham.geom import (
    differential,
    exterior_derivative,
    interior_product,
    is_hamiltonian_description,
    lie_derivative,
    twisted_two_form,
)

osc = catalog.oscillator_r4()

print("chart:", osc.chart)
print("flow field:", osc.gamma)
print()

for label, form, ham in (
    ("primary", osc.omega_primary, osc.h_primary),
    ("swapped", osc.omega_swapped, osc.h_swapped),
):
    report = is_hamiltonian_description(osc.gamma, form, ham)
    print(f"{label} description")
    print("  2-form:     ", form)
    print("  Hamiltonian:", ham)
    print("  holds:", report.holds, " closed:", report.closed,
          " nondegenerate:", report.nondegenerate)
    print()

print("swap tensor invariant under the flow:",
      lie_derivative(osc.gamma, osc.swap_tensor).is_zero)

w = twisted_two_form(osc.swap_tensor, osc.quartic_invariant)
print("twisted 2-form from the quartic invariant:")
print(" ", w)
print("  closed:", exterior_derivative(w).is_zero)

new_h = -(interior_product(osc.swap_tensor.apply(osc.gamma),
                           differential(osc.quartic_invariant)).coefficient(()))
print("  induced Hamiltonian -dF(T(Gamma)):", new_h)
print("  (zero here: this particular twisted form is degenerate along the flow)")

contraction = interior_product(osc.gamma, osc.time_form).coefficient(())
print()
print("time 1-form contracts with the flow to the constant 1:",
      contraction == osc.chart.one())
print("(the unreduced quotient is bulky; equality is decided by cross-multiplication)")
