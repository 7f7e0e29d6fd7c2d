"""Normal forms of integrable flows and validators for tangent,
cotangent, and linear structures.

A flow is integrable in normal form when it decomposes over commuting
independent fields that preserve a full set of independent integrals;
each condition is checked exactly, with pointwise ranks probed at
seeded rational sample points.
"""

from fractions import Fraction

from geoham import catalog
from geoham.expr import Chart, parse_expression
from geoham.geom import (
    DifferentialForm,
    Tensor11,
    VectorField,
    check_normal_form,
    validate_cotangent_structure,
    validate_linear_structure,
    validate_tangent_structure,
)

osc = catalog.oscillator_r4()
chart = osc.chart
expr = lambda text: parse_expression(text, chart)

integrals = [expr("1/2*(p1^2 + q1^2)"), expr("1/2*(p2^2 + q2^2)")]
rotations = [
    VectorField(chart, [expr("p1"), expr("0"), expr("-q1"), expr("0")]),
    VectorField(chart, [expr("0"), expr("p2"), expr("0"), expr("-q2")]),
]
omega = chart.coordinate("omega")

report = check_normal_form(
    osc.gamma, integrals, rotations, nu=[omega, omega],
    constants={"omega": Fraction(3, 2)},
)
print("oscillator normal form: Gamma = omega*X1 + omega*X2")
print("  integrals independent:", report.integrals_independent)
print("  fields commute:       ", report.fields_commute)
print("  integrals preserved:  ", report.fields_preserve_integrals)
print("  coefficients match:   ", report.coefficients_match)
print("  all conditions:       ", report.passed,
      "(completeness assumed:", str(report.completeness_assumed) + ")")
print()

qv = Chart(["q", "v"])
soldering = Tensor11(qv, [[qv.zero(), qv.zero()], [qv.one(), qv.zero()]])
dilation = VectorField(qv, [qv.zero(), qv.coordinate("v")])
tangent = validate_tangent_structure(soldering, dilation)
print("tangent structure (soldering dq (x) d/dv, dilation v d/dv):", tangent.valid)
for name, value in tangent.checks.items():
    print(f"  {name}: {value}")
print()

qp = Chart(["q", "p"])
theta = DifferentialForm(qp, 1, {(0,): qp.coordinate("p")})
delta = VectorField(qp, [qp.zero(), qp.coordinate("p")])
cotangent = validate_cotangent_structure(theta, delta)
print("cotangent structure (theta = p dq, Delta = p d/dp):", cotangent.valid)
print()

euler = VectorField(qp, [qp.coordinate("q"), qp.coordinate("p")])
print("linear structure (Euler field):", validate_linear_structure(euler).valid)
print("partial linear structure (v d/dv):", validate_linear_structure(dilation).valid)
