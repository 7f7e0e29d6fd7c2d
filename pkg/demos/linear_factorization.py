"""Factorizing a linear system into skew x symmetric, and moving the
factorization around with non-canonical symmetries.

A linear flow ẋ = Ax is Hamiltonian iff A = Λ·H with Λ invertible skew
and H symmetric, which happens exactly when all odd traces of A vanish.
Exponentials of even powers of A commute with A but need not preserve
Λ, and then transport (Λ, H) to a genuinely different description.
"""

from fractions import Fraction

from geoham import catalog
from geoham.errors import NotDecomposableError
from geoham.linfact import (
    ExactMatrix,
    hamiltonian_factorize,
    is_canonical,
    noncanonical_symmetry,
    odd_trace_test,
    transform_description,
)

A = ExactMatrix(catalog.oscillator_generator_entries(n=2))
print("linear system A:")
print(" ", A)
print("odd traces:", odd_trace_test(A).to_dict()["traces"])

fact = hamiltonian_factorize(A)
print("factorization A = lam @ ham")
print("  lam =", fact.lam)
print("  ham =", fact.ham)
print()

T = noncanonical_symmetry(A, k=1, lam=Fraction(-1, 2))
print("symmetry T = exp(-1/2 * A^2) =", T, "(exact: A^2 = -I)")
print("canonical for lam?", is_canonical(T, fact.lam))

moved = transform_description(fact, T)
print("transported description (exact):")
print("  lam' =", moved.lam)
print("  ham' =", moved.ham)
print("  same description as before?", moved.same_description)
print("  product still reproduces A:", moved.factorization.source == A)
print()

print("a matrix with a non-zero odd trace is rejected:")
identity = ExactMatrix.identity(2)
try:
    hamiltonian_factorize(identity)
except NotDecomposableError as exc:
    print("  identity ->", exc.reason)
print("  trace witness:", odd_trace_test(identity).to_dict())
