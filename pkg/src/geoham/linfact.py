"""Poisson-times-symmetric factorization of linear systems.

A linear system ẋ = Ax is Hamiltonian exactly when A = Λ·H with Λ an
invertible skew matrix and H symmetric.  Writing Ω = Λ⁻¹ turns this
into the linear constraint ΩA + AᵀΩ = 0 over skew matrices, which is
solved exactly; an invertible kernel element is then located by a
deterministic small-integer sweep followed by seeded random trials
(the determinant is a polynomial on the kernel, so generic combinations
work whenever any invertible element exists).

Non-canonical linear symmetries T of A (T A T⁻¹ = A with T Λ Tᵀ ≠ Λ)
transport a factorization to a genuinely different one:
A = (TΛTᵀ)·((T⁻¹)ᵀHT⁻¹).  Exponentials e^{λA^{2k}} provide such
symmetries; they are kept exact when A^{2k} is a rational multiple of
the identity (the scale e^{λc} is carried symbolically as a rational
``log_scale``) and computed in floating point otherwise.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _linalg
from .errors import NotDecomposableError

_FLOAT_TOL = 1e-12


class ExactMatrix:
    """Square matrix with exact rational entries and an optional
    exponential prefactor: the value represented is e^{log_scale} · entries.

    The prefactor keeps results like e^{λ}·Λ exact (e^{s} is irrational
    for rational s ≠ 0, so equality of two represented values forces
    equal scales and equal entries).
    """

    __slots__ = ("entries", "log_scale")

    def __init__(self, entries, log_scale: Fraction = Fraction(0)):
        rows = tuple(tuple(Fraction(x) for x in row) for row in entries)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ValueError("entries must form a non-empty square matrix")
        self.entries = rows
        self.log_scale = Fraction(log_scale)

    # -- constructors -----------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int) -> "ExactMatrix":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def scaled_identity(cls, n: int, log_scale: Fraction) -> "ExactMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], log_scale)

    # -- shape and views ----------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.entries)

    def to_float(self) -> np.ndarray:
        scale = float(np.exp(float(self.log_scale)))
        return scale * np.array([[float(x) for x in row] for row in self.entries])

    def row_lists(self):
        return [list(row) for row in self.entries]

    # -- algebra ---------------------------------------------------------------
    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        n = self.n
        a, b = self.entries, other.entries
        rows = [
            [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
        return ExactMatrix(rows, self.log_scale + other.log_scale)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        if self.log_scale != other.log_scale:
            if self.is_zero:
                return other
            if other.is_zero:
                return self
            raise ValueError("cannot add matrices with different exponential scales exactly")
        return ExactMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
            self.log_scale,
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-other)

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix([[-x for x in row] for row in self.entries], self.log_scale)

    def scale_by(self, factor) -> "ExactMatrix":
        factor = Fraction(factor)
        return ExactMatrix(
            [[factor * x for x in row] for row in self.entries], self.log_scale
        )

    def transpose(self) -> "ExactMatrix":
        n = self.n
        return ExactMatrix(
            [[self.entries[j][i] for j in range(n)] for i in range(n)], self.log_scale
        )

    def power(self, exponent: int) -> "ExactMatrix":
        if exponent < 0:
            raise ValueError("negative matrix power; invert explicitly")
        result = ExactMatrix.identity(self.n)
        base = self
        k = exponent
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def determinant(self) -> Fraction:
        """Determinant of the rational entries (the e^{n·s} prefactor is
        positive, so invertibility is decided by this alone)."""
        return _linalg.det(self.row_lists())

    def inverse(self) -> "ExactMatrix":
        inv = _linalg.inverse(self.row_lists())
        if inv is None:
            raise ZeroDivisionError("matrix is singular")
        return ExactMatrix(inv, -self.log_scale)

    def trace(self) -> Fraction:
        if self.log_scale != 0:
            raise ValueError("trace of an exponentially scaled matrix is not rational")
        return sum(self.entries[i][i] for i in range(self.n))

    # -- predicates ------------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def is_skew(self) -> bool:
        return all(
            self.entries[i][j] == -self.entries[j][i]
            for i in range(self.n)
            for j in range(i, self.n)
        )

    def is_symmetric(self) -> bool:
        return all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.n)
            for j in range(i + 1, self.n)
        )

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.n != other.n:
            return False
        if self.is_zero and other.is_zero:
            return True
        return self.log_scale == other.log_scale and self.entries == other.entries

    def __str__(self):
        def fmt(x):
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

        body = "[" + ", ".join(
            "[" + ", ".join(fmt(x) for x in row) + "]" for row in self.entries
        ) + "]"
        if self.log_scale:
            return f"exp({self.log_scale}) * {body}"
        return body

    def __repr__(self):
        return f"ExactMatrix({self})"


@dataclass(frozen=True)
class Factorization:
    """A verified decomposition source = lam · ham.

    Construction re-checks every invariant exactly: lam skew and
    invertible, ham symmetric, product equal to the source.
    """

    lam: ExactMatrix
    ham: ExactMatrix
    source: ExactMatrix

    def __post_init__(self):
        if not self.lam.is_skew():
            raise ValueError("factor lam is not skew-symmetric")
        if self.lam.determinant() == 0:
            raise ValueError("factor lam is singular")
        if not self.ham.is_symmetric():
            raise ValueError("factor ham is not symmetric")
        if self.lam @ self.ham != self.source:
            raise ValueError("product lam @ ham does not reproduce the source matrix")


@dataclass(frozen=True)
class OddTraceResult:
    """Outcome of the odd-power trace test.

    Vanishing odd traces are necessary for a factorization, and
    sufficient only for generic (semisimple) matrices; traces are
    checked for odd exponents up to 2n−1, which determines all the rest
    through Newton's identities.
    """

    passed: bool
    failing_exponent: int | None = None
    failing_value: Fraction | None = None
    traces: tuple = ()

    def to_dict(self):
        return {
            "passed": self.passed,
            "failing_exponent": self.failing_exponent,
            "failing_k": None if self.failing_exponent is None else (self.failing_exponent - 1) // 2,
            "failing_value": None if self.failing_value is None else str(self.failing_value),
            "traces": [[k, str(v)] for k, v in self.traces],
            "sufficient_only_for_generic": True,
        }


def odd_trace_test(A: ExactMatrix) -> OddTraceResult:
    """Check Tr A^(2k+1) = 0 exactly for all odd exponents up to 2n−1."""
    traces = []
    power = A
    square = A @ A
    exponent = 1
    while exponent <= 2 * A.n - 1:
        value = power.trace()
        traces.append((exponent, value))
        if value != 0:
            return OddTraceResult(
                passed=False,
                failing_exponent=exponent,
                failing_value=value,
                traces=tuple(traces),
            )
        exponent += 2
        power = power @ square
    return OddTraceResult(passed=True, traces=tuple(traces))


def _skew_basis_pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _skew_from_coefficients(n, pairs, coefficients):
    rows = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), c in zip(pairs, coefficients):
        if c:
            rows[i][j] = Fraction(c)
            rows[j][i] = -Fraction(c)
    return ExactMatrix(rows)


def skew_constraint_kernel(A: ExactMatrix):
    """Exact basis of {Ω skew : ΩA + AᵀΩ = 0}, as ExactMatrix list."""
    n = A.n
    pairs = _skew_basis_pairs(n)
    At = A.transpose()
    columns = []
    for (k, l) in pairs:
        E = _skew_from_coefficients(n, [(k, l)], [1])
        M = (E @ A) + (At @ E)
        columns.append([M.entries[i][j] for (i, j) in pairs])
    if not pairs:
        return []
    constraint = [[columns[b][r] for b in range(len(pairs))] for r in range(len(pairs))]
    kernel = _linalg.kernel(constraint, ncols=len(pairs))
    return [_skew_from_coefficients(n, pairs, vec) for vec in kernel]


def _sweep_coefficients(dim, bound):
    """Deterministic small-integer sweep ordered by max-norm radius.

    Skips the zero vector and sign-flipped duplicates (−c spans the
    same line as c, so invertibility is unaffected).
    """
    for radius in range(1, bound + 1):
        for combo in itertools.product(range(-radius, radius + 1), repeat=dim):
            if max(abs(c) for c in combo) != radius:
                continue
            first = next((c for c in combo if c != 0), 0)
            if first < 0:
                continue
            yield combo


def hamiltonian_factorize(
    A: ExactMatrix,
    sweep_bound: int = 3,
    sweep_budget: int = 4000,
    random_trials: int = 1000,
    seed: int = 0,
) -> Factorization:
    """Factor A = Λ·H with Λ skew invertible and H symmetric, exactly.

    Raises :class:`NotDecomposableError` with reason "no skew solution"
    when the constraint kernel is trivial, or "no invertible element
    found within budget" when the kernel is non-trivial but the search
    budget found no invertible combination (which can happen for
    non-generic matrices even when one exists).
    """
    kernel = skew_constraint_kernel(A)
    if not kernel:
        raise NotDecomposableError("no skew solution")
    dim = len(kernel)

    def try_coefficients(coefficients):
        omega = ExactMatrix.zeros(A.n)
        for c, basis in zip(coefficients, kernel):
            if c:
                omega = omega + basis.scale_by(c)
        if omega.is_zero or omega.determinant() == 0:
            return None
        lam = omega.inverse()
        ham = omega @ A
        return Factorization(lam=lam, ham=ham, source=A)

    for combo in itertools.islice(_sweep_coefficients(dim, sweep_bound), sweep_budget):
        result = try_coefficients(combo)
        if result is not None:
            return result
    rng = random.Random(seed)
    for _ in range(random_trials):
        combo = [rng.randint(-9, 9) for _ in range(dim)]
        result = try_coefficients(combo)
        if result is not None:
            return result
    raise NotDecomposableError("no invertible element found within budget")


def noncanonical_symmetry(A: ExactMatrix, k: int, lam) -> ExactMatrix | np.ndarray:
    """The symmetry T = exp(lam · A^(2k)) of the linear system A.

    Exact (an :class:`ExactMatrix` with symbolic exponential scale) when
    A^(2k) is a rational multiple of the identity; otherwise a float
    matrix computed by scaling-and-squaring Padé, with the commutation
    T A T⁻¹ = A verified to 1e-12.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    lam = Fraction(lam)
    if A.log_scale != 0:
        raise ValueError("expected an unscaled system matrix")
    if lam == 0:
        return ExactMatrix.identity(A.n)
    B = A.power(2 * k)
    diagonal = B.entries[0][0]
    if all(
        B.entries[i][j] == (diagonal if i == j else 0)
        for i in range(A.n)
        for j in range(A.n)
    ):
        return ExactMatrix.scaled_identity(A.n, log_scale=lam * diagonal)
    from scipy.linalg import expm

    Bf = B.to_float()
    T = expm(float(lam) * Bf)
    Af = A.to_float()
    residual = np.max(np.abs(T @ Af @ np.linalg.inv(T) - Af))
    if residual > _FLOAT_TOL * max(1.0, float(np.max(np.abs(Af)))):
        raise ArithmeticError(f"float symmetry check failed, residual {residual:g}")
    return T


def is_canonical(T, lam: ExactMatrix) -> bool:
    """True when T preserves the skew factor: T·lam·Tᵀ = lam.

    Exact for :class:`ExactMatrix` input, within 1e-12 for float input.
    """
    if isinstance(T, ExactMatrix):
        return (T @ lam @ T.transpose()) == lam
    T = np.asarray(T, dtype=float)
    lam_f = lam.to_float()
    scale = max(1.0, float(np.max(np.abs(lam_f))))
    return bool(np.max(np.abs(T @ lam_f @ T.T - lam_f)) <= _FLOAT_TOL * scale)


@dataclass(frozen=True)
class TransformedDescription:
    """A factorization transported by a symmetry, plus comparison flags.

    ``same_description`` is True when the symmetry was canonical for the
    original skew factor (the transported pair coincides with it).
    ``exact`` distinguishes exact transport from the float path, where
    ``max_residual`` bounds the verification error.
    """

    lam: object
    ham: object
    source: ExactMatrix
    same_description: bool
    exact: bool
    max_residual: float = 0.0

    @property
    def factorization(self) -> Factorization | None:
        if not self.exact:
            return None
        return Factorization(lam=self.lam, ham=self.ham, source=self.source)


def transform_description(fact: Factorization, T) -> TransformedDescription:
    """Transport a factorization along a symmetry T of its source.

    Checks T A T⁻¹ = A (exactly, or to float tolerance), then returns
    Λ' = TΛTᵀ and H' = (T⁻¹)ᵀHT⁻¹ with the product re-verified against
    the source.
    """
    A = fact.source
    if isinstance(T, ExactMatrix):
        if T.determinant() == 0:
            raise ValueError("symmetry candidate is singular")
        T_inv = T.inverse()
        if (T @ A @ T_inv) != A:
            raise ValueError("T is not a symmetry of the source matrix")
        new_lam = T @ fact.lam @ T.transpose()
        new_ham = T_inv.transpose() @ fact.ham @ T_inv
        fact_new = Factorization(lam=new_lam, ham=new_ham, source=A)
        return TransformedDescription(
            lam=fact_new.lam,
            ham=fact_new.ham,
            source=A,
            same_description=(new_lam == fact.lam),
            exact=True,
        )
    T = np.asarray(T, dtype=float)
    Af = A.to_float()
    scale = max(1.0, float(np.max(np.abs(Af))))
    T_inv = np.linalg.inv(T)
    symmetry_residual = float(np.max(np.abs(T @ Af @ T_inv - Af)))
    if symmetry_residual > _FLOAT_TOL * scale:
        raise ValueError("T is not a symmetry of the source matrix (float check)")
    lam_f = fact.lam.to_float()
    ham_f = fact.ham.to_float()
    new_lam = T @ lam_f @ T.T
    new_ham = T_inv.T @ ham_f @ T_inv
    product_scale = max(1.0, float(np.max(np.abs(new_lam))) * float(np.max(np.abs(new_ham))))
    product_residual = float(np.max(np.abs(new_lam @ new_ham - Af))) / product_scale
    same = bool(
        np.max(np.abs(new_lam - lam_f)) <= _FLOAT_TOL * max(1.0, float(np.max(np.abs(lam_f))))
    )
    return TransformedDescription(
        lam=new_lam,
        ham=new_ham,
        source=A,
        same_description=same,
        exact=False,
        max_residual=max(symmetry_residual, product_residual),
    )
