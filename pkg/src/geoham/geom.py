"""Exterior calculus on a chart: differential forms, vector fields,
(1,1)-tensor fields, and the structural checks built from them.

Coefficients are exact rational functions, so every identity here
(d² = 0, Cartan's formula, bracket relations, Hamiltonian-description
residuals) is decided exactly, not numerically.  Nondegeneracy of a
2-form is decided by the symbolic determinant of its coefficient
matrix; its zero locus is only probed at sample points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Sequence

from . import _linalg
from .errors import ChartMismatchError, PoleError
from .expr import Chart, RationalFunction, require_same_chart


class VectorField:
    """A vector field: one rational-function component per coordinate."""

    __slots__ = ("chart", "components")

    def __init__(self, chart: Chart, components: Sequence[RationalFunction]):
        components = tuple(_as_rf(chart, c) for c in components)
        if len(components) != chart.dimension:
            raise ValueError("component count does not match chart dimension")
        self.chart = chart
        self.components = components

    @classmethod
    def zero(cls, chart: Chart) -> "VectorField":
        return cls(chart, [chart.zero()] * chart.dimension)

    @classmethod
    def coordinate_field(cls, chart: Chart, name: str) -> "VectorField":
        """The basis field along one coordinate (d/d<name>)."""
        comps = [chart.zero()] * chart.dimension
        comps[chart.coordinate_axis(name)] = chart.one()
        return cls(chart, comps)

    def __add__(self, other: "VectorField") -> "VectorField":
        require_same_chart(self, other)
        return VectorField(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        require_same_chart(self, other)
        return VectorField(self.chart, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "VectorField":
        return VectorField(self.chart, [-a for a in self.components])

    def __rmul__(self, scalar) -> "VectorField":
        return VectorField(self.chart, [scalar * a for a in self.components])

    def apply(self, f: RationalFunction) -> RationalFunction:
        """Directional derivative X(f) = sum_i X^i df/dx_i."""
        total = self.chart.zero()
        for i, comp in enumerate(self.components):
            if not comp.is_zero:
                total = total + comp * f.derivative(i)
        return total

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    def evaluate(self, point, constants=None):
        return [c.evaluate(point, constants) for c in self.components]

    def __eq__(self, other):
        return (
            isinstance(other, VectorField)
            and self.chart == other.chart
            and all(a == b for a, b in zip(self.components, other.components))
        )

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.components) + "]"

    def __repr__(self):
        return f"VectorField({self})"


class DifferentialForm:
    """Antisymmetric k-form: strictly increasing index tuples -> coefficient."""

    __slots__ = ("chart", "degree", "coeffs")

    def __init__(self, chart: Chart, degree: int, coeffs=None):
        if not 0 <= degree <= chart.dimension:
            raise ValueError(f"degree {degree} out of range for dimension {chart.dimension}")
        clean = {}
        for idx, coeff in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index tuple {idx} has wrong length for a {degree}-form")
            if any(not 0 <= i < chart.dimension for i in idx):
                raise ValueError(f"index out of chart range in {idx}")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index tuple {idx} is not strictly increasing")
            coeff = _as_rf(chart, coeff)
            if not coeff.is_zero:
                clean[idx] = coeff
        self.chart = chart
        self.degree = degree
        self.coeffs = clean

    @classmethod
    def zero(cls, chart: Chart, degree: int) -> "DifferentialForm":
        return cls(chart, degree)

    @classmethod
    def from_function(cls, f: RationalFunction) -> "DifferentialForm":
        return cls(f.chart, 0, {(): f})

    @classmethod
    def from_terms(cls, chart: Chart, degree: int, terms) -> "DifferentialForm":
        """Build from possibly unsorted/repeated index tuples, resolving signs."""
        acc = {}
        for idx, coeff in terms:
            sorted_idx, sign = _sort_with_sign(idx)
            if sign == 0:
                continue
            coeff = _as_rf(chart, coeff)
            if sign < 0:
                coeff = -coeff
            prev = acc.get(sorted_idx)
            acc[sorted_idx] = coeff if prev is None else prev + coeff
        return cls(chart, degree, acc)

    def coefficient(self, idx) -> RationalFunction:
        """Coefficient at an arbitrary index tuple, with antisymmetry sign."""
        sorted_idx, sign = _sort_with_sign(tuple(idx))
        if sign == 0:
            return self.chart.zero()
        coeff = self.coeffs.get(sorted_idx)
        if coeff is None:
            return self.chart.zero()
        return coeff if sign > 0 else -coeff

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        require_same_chart(self, other)
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        coeffs = dict(self.coeffs)
        for idx, coeff in other.coeffs.items():
            prev = coeffs.get(idx)
            coeffs[idx] = coeff if prev is None else prev + coeff
        return DifferentialForm(self.chart, self.degree, coeffs)

    def __sub__(self, other: "DifferentialForm") -> "DifferentialForm":
        return self + (-other)

    def __neg__(self) -> "DifferentialForm":
        return DifferentialForm(
            self.chart, self.degree, {i: -c for i, c in self.coeffs.items()}
        )

    def __rmul__(self, scalar) -> "DifferentialForm":
        return DifferentialForm(
            self.chart, self.degree, {i: scalar * c for i, c in self.coeffs.items()}
        )

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        if self.chart != other.chart or self.degree != other.degree:
            return False
        for idx in set(self.coeffs) | set(other.coeffs):
            if self.coefficient(idx) != other.coefficient(idx):
                return False
        return True

    def __str__(self):
        names = self.chart.names
        if self.is_zero:
            return f"{self.degree}-form: 0"
        pieces = []
        for idx in sorted(self.coeffs):
            basis = "^".join(f"d{names[i]}" for i in idx) if idx else ""
            coeff = f"({self.coeffs[idx]})"
            pieces.append(f"{coeff} {basis}".strip())
        return f"{self.degree}-form: " + " + ".join(pieces)

    def __repr__(self):
        return f"DifferentialForm({self})"


class Tensor11:
    """A (1,1)-tensor field: square matrix of components, output index first."""

    __slots__ = ("chart", "components")

    def __init__(self, chart: Chart, components):
        rows = tuple(tuple(_as_rf(chart, x) for x in row) for row in components)
        n = chart.dimension
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError("tensor component matrix must be dim x dim")
        self.chart = chart
        self.components = rows

    @classmethod
    def identity(cls, chart: Chart) -> "Tensor11":
        one, zero = chart.one(), chart.zero()
        n = chart.dimension
        return cls(chart, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, chart: Chart) -> "Tensor11":
        zero = chart.zero()
        n = chart.dimension
        return cls(chart, [[zero] * n for _ in range(n)])

    def apply(self, X: VectorField) -> VectorField:
        require_same_chart(self, X)
        comps = []
        for row in self.components:
            total = self.chart.zero()
            for entry, x in zip(row, X.components):
                if not entry.is_zero and not x.is_zero:
                    total = total + entry * x
            comps.append(total)
        return VectorField(self.chart, comps)

    def compose(self, other: "Tensor11") -> "Tensor11":
        require_same_chart(self, other)
        n = self.chart.dimension
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                total = self.chart.zero()
                for k in range(n):
                    a, b = self.components[i][k], other.components[k][j]
                    if not a.is_zero and not b.is_zero:
                        total = total + a * b
                row.append(total)
            rows.append(row)
        return Tensor11(self.chart, rows)

    def __add__(self, other: "Tensor11") -> "Tensor11":
        require_same_chart(self, other)
        return Tensor11(
            self.chart,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.components, other.components)],
        )

    def __sub__(self, other: "Tensor11") -> "Tensor11":
        return self + (-other)

    def __neg__(self) -> "Tensor11":
        return Tensor11(self.chart, [[-a for a in row] for row in self.components])

    def __rmul__(self, scalar) -> "Tensor11":
        return Tensor11(self.chart, [[scalar * a for a in row] for row in self.components])

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for row in self.components for e in row)

    def is_constant(self) -> bool:
        return all(e.is_constant() for row in self.components for e in row)

    def __eq__(self, other):
        return (
            isinstance(other, Tensor11)
            and self.chart == other.chart
            and all(
                a == b
                for ra, rb in zip(self.components, other.components)
                for a, b in zip(ra, rb)
            )
        )

    def __str__(self):
        return "[" + ", ".join(
            "[" + ", ".join(str(e) for e in row) + "]" for row in self.components
        ) + "]"

    def __repr__(self):
        return f"Tensor11({self})"


def _as_rf(chart: Chart, value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        if value.chart != chart:
            raise ChartMismatchError("coefficient lives on a different chart")
        return value
    if isinstance(value, (int, Fraction)):
        return RationalFunction.from_scalar(chart, value)
    raise TypeError(f"cannot use {type(value).__name__} as a coefficient")


def _sort_with_sign(idx):
    """Sort an index tuple; returns (sorted tuple, sign) with sign 0 on repeats."""
    idx = list(idx)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return tuple(idx), 0
    return tuple(idx), sign


# ---------------------------------------------------------------------------
# Core operations
# ---------------------------------------------------------------------------

def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    """Graded-antisymmetric product a ∧ b."""
    require_same_chart(a, b)
    degree = a.degree + b.degree
    if degree > a.chart.dimension:
        return DifferentialForm.zero(a.chart, a.chart.dimension)
    terms = []
    for ia, ca in a.coeffs.items():
        for ib, cb in b.coeffs.items():
            terms.append((ia + ib, ca * cb))
    return DifferentialForm.from_terms(a.chart, degree, terms)


def exterior_derivative(a: DifferentialForm) -> DifferentialForm:
    """The exterior derivative; satisfies d(d(a)) = 0 exactly.

    The derivative of a top-degree form is represented as the zero form
    of top degree (degrees never exceed the chart dimension).
    """
    chart = a.chart
    if a.degree >= chart.dimension:
        return DifferentialForm.zero(chart, chart.dimension)
    terms = []
    for idx, coeff in a.coeffs.items():
        for axis in range(chart.dimension):
            if axis in idx:
                continue
            d_coeff = coeff.derivative(axis)
            if d_coeff.is_zero:
                continue
            terms.append(((axis,) + idx, d_coeff))
    return DifferentialForm.from_terms(chart, a.degree + 1, terms)


def differential(f: RationalFunction) -> DifferentialForm:
    """df as a 1-form."""
    return exterior_derivative(DifferentialForm.from_function(f))


def interior_product(X: VectorField, a: DifferentialForm) -> DifferentialForm:
    """Contraction i_X a; the zero form of degree 0 when a is a function."""
    require_same_chart(X, a)
    if a.degree == 0:
        return DifferentialForm.zero(a.chart, 0)
    coeffs = {}
    for idx, coeff in a.coeffs.items():
        for s, axis in enumerate(idx):
            comp = X.components[axis]
            if comp.is_zero:
                continue
            target = idx[:s] + idx[s + 1:]
            term = comp * coeff if s % 2 == 0 else -(comp * coeff)
            prev = coeffs.get(target)
            coeffs[target] = term if prev is None else prev + term
    return DifferentialForm(a.chart, a.degree - 1, coeffs)


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """Commutator [X, Y]; antisymmetric, satisfies the Jacobi identity."""
    require_same_chart(X, Y)
    chart = X.chart
    comps = []
    for i in range(chart.dimension):
        comps.append(X.apply(Y.components[i]) - Y.apply(X.components[i]))
    return VectorField(chart, comps)


def lie_derivative(X: VectorField, target):
    """Lie derivative along X of a function, form, vector field, or tensor.

    Forms use Cartan's formula i_X d + d i_X; vector fields reduce to
    the bracket; (1,1)-tensors use the Leibniz-compatible component
    formula, so L_X(T(Y)) = (L_X T)(Y) + T(L_X Y) holds exactly.
    """
    if isinstance(target, RationalFunction):
        return X.apply(target)
    if isinstance(target, DifferentialForm):
        require_same_chart(X, target)
        if target.degree == 0:
            f = target.coefficient(())
            return DifferentialForm.from_function(X.apply(f))
        return interior_product(X, exterior_derivative(target)) + exterior_derivative(
            interior_product(X, target)
        )
    if isinstance(target, VectorField):
        return lie_bracket(X, target)
    if isinstance(target, Tensor11):
        require_same_chart(X, target)
        chart = X.chart
        n = chart.dimension
        T = target.components
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                total = X.apply(T[i][j])
                for k in range(n):
                    if not T[k][j].is_zero:
                        total = total - T[k][j] * X.components[i].derivative(k)
                    if not T[i][k].is_zero:
                        total = total + T[i][k] * X.components[k].derivative(j)
                row.append(total)
            rows.append(row)
        return Tensor11(chart, rows)
    raise TypeError(f"cannot take a Lie derivative of {type(target).__name__}")


def twisted_differential(T: Tensor11, f: RationalFunction) -> DifferentialForm:
    """The 1-form sending X to df(T(X)); components sum_j (df/dx_j) T^j_i."""
    require_same_chart(T, DifferentialForm.from_function(f))
    chart = T.chart
    partials = [f.derivative(j) for j in range(chart.dimension)]
    coeffs = {}
    for i in range(chart.dimension):
        total = chart.zero()
        for j in range(chart.dimension):
            entry = T.components[j][i]
            if not entry.is_zero and not partials[j].is_zero:
                total = total + partials[j] * entry
        if not total.is_zero:
            coeffs[(i,)] = total
    return DifferentialForm(chart, 1, coeffs)


def tensor_insertion(T: Tensor11, a: DifferentialForm) -> DifferentialForm:
    """Degree-preserving derivation: insert T into one argument slot at a time."""
    require_same_chart(T, a)
    chart = a.chart
    if a.degree == 0:
        return DifferentialForm.zero(chart, 0)
    coeffs = {}
    for idx in _increasing_tuples(chart.dimension, a.degree):
        total = chart.zero()
        for s in range(a.degree):
            for m in range(chart.dimension):
                entry = T.components[m][idx[s]]
                if entry.is_zero:
                    continue
                coeff = a.coefficient(idx[:s] + (m,) + idx[s + 1:])
                if not coeff.is_zero:
                    total = total + entry * coeff
        if not total.is_zero:
            coeffs[idx] = total
    return DifferentialForm(chart, a.degree, coeffs)


def twisted_exterior_derivative(T: Tensor11, a: DifferentialForm) -> DifferentialForm:
    """d_T = i_T ∘ d − d ∘ i_T; on functions this is the twisted differential."""
    return tensor_insertion(T, exterior_derivative(a)) - exterior_derivative(
        tensor_insertion(T, a)
    )


def twisted_two_form(T: Tensor11, F: RationalFunction) -> DifferentialForm:
    """The closed 2-form d(d_T F); closed by construction (d² = 0)."""
    return exterior_derivative(twisted_differential(T, F))


def _increasing_tuples(n, k):
    if k == 0:
        yield ()
        return
    idx = list(range(k))
    while True:
        yield tuple(idx)
        for pos in reversed(range(k)):
            if idx[pos] != pos + n - k:
                break
        else:
            return
        idx[pos] += 1
        for j in range(pos + 1, k):
            idx[j] = idx[j - 1] + 1


# ---------------------------------------------------------------------------
# Determinants and sampling helpers
# ---------------------------------------------------------------------------

def two_form_matrix(a: DifferentialForm):
    """Antisymmetric coefficient matrix W with W[i][j] = a(e_i, e_j)."""
    if a.degree != 2:
        raise ValueError("expected a 2-form")
    n = a.chart.dimension
    return [[a.coefficient((i, j)) for j in range(n)] for i in range(n)]


def symbolic_determinant(rows) -> RationalFunction:
    """Exact determinant of a matrix of rational functions.

    Laplace expansion memoized over column subsets; intended for the
    small (dim ≤ 8) matrices that appear here.
    """
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    chart = rows[0][0].chart
    cache = {}

    def minor(row, mask):
        if row == n:
            return chart.one()
        key = mask
        if key in cache:
            return cache[key]
        total = chart.zero()
        sign = 1
        for col in range(n):
            bit = 1 << col
            if mask & bit:
                continue
            entry = rows[row][col]
            if not entry.is_zero:
                total = total + (entry * minor(row + 1, mask | bit) if sign > 0
                                 else -(entry * minor(row + 1, mask | bit)))
            sign = -sign
        cache[key] = total
        return total

    return minor(0, 0)


def sample_points(chart: Chart, probes, count=8, seed=42, bound=10, constants=None):
    """Seeded rational sample points in [-bound, bound]^dim avoiding poles.

    ``probes`` are rational functions that must all evaluate cleanly at
    every returned point.
    """
    rng = random.Random(seed)
    points = []
    attempts = 0
    while len(points) < count:
        attempts += 1
        if attempts > 200 * count:
            raise PoleError("could not find enough pole-free sample points")
        point = [Fraction(rng.randint(-8 * bound, 8 * bound), 8) for _ in range(chart.dimension)]
        try:
            for probe in probes:
                probe.evaluate(point, constants)
        except PoleError:
            continue
        points.append(point)
    return points


# ---------------------------------------------------------------------------
# Structural reports
# ---------------------------------------------------------------------------

@dataclass
class HamiltonianDescriptionReport:
    """Outcome of checking i_Γω = dH together with dω = 0."""

    holds: bool
    closed: bool
    matches: bool
    nondegenerate: bool
    residual: DifferentialForm
    degenerate_samples: list

    def to_dict(self):
        return {
            "holds": self.holds,
            "closed": self.closed,
            "matches": self.matches,
            "nondegenerate": self.nondegenerate,
            "residual": str(self.residual),
            "degenerate_samples": [[str(x) for x in p] for p in self.degenerate_samples],
        }


def is_hamiltonian_description(
    gamma: VectorField,
    omega: DifferentialForm,
    hamiltonian: RationalFunction,
    sample_seed: int = 42,
    sample_count: int = 8,
) -> HamiltonianDescriptionReport:
    """Check whether (ω, H) is a Hamiltonian description of the field.

    ``holds`` requires the contraction identity i_Γω = dH *and* dω = 0,
    both exactly.  Nondegeneracy is the symbolic determinant of the
    coefficient matrix being non-zero as a rational function; points of
    the degeneracy locus are only reported via sampling.
    """
    require_same_chart(gamma, omega)
    if omega.degree != 2:
        raise ValueError("a Hamiltonian description needs a 2-form")
    if gamma.chart.dimension % 2 != 0:
        raise ValueError("Hamiltonian descriptions need an even-dimensional chart")
    residual = interior_product(gamma, omega) - differential(hamiltonian)
    matches = residual.is_zero
    closed = exterior_derivative(omega).is_zero
    detw = symbolic_determinant(two_form_matrix(omega))
    nondegenerate = not detw.is_zero
    degenerate_samples = []
    if nondegenerate:
        points = sample_points(
            omega.chart, [c for c in omega.coeffs.values()], count=sample_count, seed=sample_seed
        )
        for point in points:
            try:
                if detw.evaluate(point) == 0:
                    degenerate_samples.append(point)
            except PoleError:
                continue
    return HamiltonianDescriptionReport(
        holds=matches and closed,
        closed=closed,
        matches=matches,
        nondegenerate=nondegenerate,
        residual=residual,
        degenerate_samples=degenerate_samples,
    )


@dataclass
class NormalFormReport:
    """Condition-by-condition result of the commuting-fields normal form test."""

    integrals_independent: bool
    integral_rank_full_at_samples: bool
    fields_commute: bool
    fields_independent_at_samples: bool
    fields_preserve_integrals: bool
    coefficients_match: bool | None
    solved_coefficients: list
    completeness_assumed: bool = True
    sample_points: list = dataclass_field(default_factory=list)

    @property
    def passed(self) -> bool:
        conditions = [
            self.integrals_independent,
            self.integral_rank_full_at_samples,
            self.fields_commute,
            self.fields_independent_at_samples,
            self.fields_preserve_integrals,
        ]
        if self.coefficients_match is not None:
            conditions.append(self.coefficients_match)
        return all(conditions)

    def to_dict(self):
        return {
            "passed": self.passed,
            "integrals_independent": self.integrals_independent,
            "integral_rank_full_at_samples": self.integral_rank_full_at_samples,
            "fields_commute": self.fields_commute,
            "fields_independent_at_samples": self.fields_independent_at_samples,
            "fields_preserve_integrals": self.fields_preserve_integrals,
            "coefficients_match": self.coefficients_match,
            "solved_coefficients": [
                {"point": [str(x) for x in pt], "solved": ok, "values": [str(v) for v in vals]}
                for pt, ok, vals in self.solved_coefficients
            ],
            "completeness_assumed": self.completeness_assumed,
        }


def check_normal_form(
    gamma: VectorField,
    integrals: Sequence[RationalFunction],
    fields: Sequence[VectorField],
    nu: Sequence[RationalFunction] | None = None,
    sample_count: int = 8,
    sample_seed: int = 42,
    constants=None,
) -> NormalFormReport:
    """Verify the commuting-fields normal form of an integrable field.

    Three conditions are checked: (i) the integrals are independent
    (df₁∧⋯∧dfₙ ≠ 0 symbolically, full Jacobian rank at sample points),
    (ii) the fields pairwise commute exactly and are pointwise
    independent at sample points, (iii) every field preserves every
    integral exactly.  If coefficient functions ``nu`` are supplied the
    decomposition Γ = Σ νʲ Xⱼ is verified exactly; otherwise the
    coefficients are solved for pointwise and reported.

    Completeness of the fields is a global analytic property with no
    finite certificate; reports carry ``completeness_assumed``.
    """
    chart = gamma.chart
    n = len(integrals)
    if n == 0 or len(fields) != n:
        raise ValueError("need matching, non-empty integral and field lists")
    for f in fields:
        require_same_chart(gamma, f)

    # (i) independence of the integrals
    independence_form = differential(integrals[0])
    for f in integrals[1:]:
        independence_form = wedge(independence_form, differential(f))
    integrals_independent = not independence_form.is_zero

    probes = list(integrals) + [c for X in fields for c in X.components] + list(gamma.components)
    points = sample_points(chart, probes, count=sample_count, seed=sample_seed,
                           constants=constants)

    def jacobian_rank(point):
        rows = []
        for f in integrals:
            rows.append([f.derivative(j).evaluate(point, constants) for j in range(chart.dimension)])
        return _linalg.rank(rows)

    integral_rank_full = all(jacobian_rank(pt) == n for pt in points)

    # (ii) commuting, pointwise-independent fields
    fields_commute = all(
        lie_bracket(fields[i], fields[j]).is_zero for i in range(n) for j in range(i + 1, n)
    )
    def field_rank(point):
        rows = [[c.evaluate(point, constants) for c in X.components] for X in fields]
        return _linalg.rank(rows)

    fields_independent = all(field_rank(pt) == n for pt in points)

    # (iii) invariance of the integrals
    fields_preserve = all(X.apply(f).is_zero for X in fields for f in integrals)

    coefficients_match = None
    solved = []
    if nu is not None:
        if len(nu) != n:
            raise ValueError("need one coefficient function per field")
        combo = VectorField.zero(chart)
        for coeff, X in zip(nu, fields):
            combo = combo + VectorField(chart, [coeff * c for c in X.components])
        coefficients_match = (gamma - combo).is_zero
    else:
        for point in points:
            columns = [[c.evaluate(point, constants) for c in X.components] for X in fields]
            matrix = [[columns[j][i] for j in range(n)] for i in range(chart.dimension)]
            rhs = [c.evaluate(point, constants) for c in gamma.components]
            solution = _linalg.solve(matrix, rhs)
            solved.append((point, solution is not None, solution or []))

    return NormalFormReport(
        integrals_independent=integrals_independent,
        integral_rank_full_at_samples=integral_rank_full,
        fields_commute=fields_commute,
        fields_independent_at_samples=fields_independent,
        fields_preserve_integrals=fields_preserve,
        coefficients_match=coefficients_match,
        solved_coefficients=solved,
        sample_points=points,
    )


@dataclass
class StructureReport:
    """Result of validating a tangent/cotangent/linear structure."""

    kind: str
    checks: dict
    valid: bool

    def to_dict(self):
        checks = {}
        for name, value in self.checks.items():
            checks[name] = "unknown" if value is None else value
        return {"kind": self.kind, "valid": self.valid, "checks": checks}


def validate_tangent_structure(S: Tensor11, delta: VectorField) -> StructureReport:
    """Tangent-bundle structure checks for a candidate soldering tensor.

    Checks S∘S = 0, S(Δ) = 0, rank S = dim/2 (constant components only;
    otherwise reported as unknown), and that the twisted differential of
    every coordinate is d_S-closed (d_S² = 0 on generators).
    """
    require_same_chart(S, delta)
    chart = S.chart
    checks = {}
    checks["s_squared_zero"] = S.compose(S).is_zero
    checks["s_kills_delta"] = S.apply(delta).is_zero
    if S.is_constant():
        rows = [[e.constant_value() for e in row] for row in S.components]
        checks["rank_is_half_dimension"] = (
            chart.dimension % 2 == 0 and _linalg.rank(rows) == chart.dimension // 2
        )
    else:
        checks["rank_is_half_dimension"] = None  # unknown: rank may jump pointwise
    twisted_ok = True
    for name in chart.names:
        first = twisted_differential(S, chart.coordinate(name))
        if not twisted_exterior_derivative(S, first).is_zero:
            twisted_ok = False
            break
    checks["twisted_differential_squares_to_zero"] = twisted_ok
    valid = all(v for v in checks.values() if v is not None)
    return StructureReport(kind="tangent", checks=checks, valid=valid)


def validate_cotangent_structure(theta: DifferentialForm, delta: VectorField) -> StructureReport:
    """Cotangent-bundle structure checks for a candidate Liouville 1-form."""
    require_same_chart(theta, delta)
    if theta.degree != 1:
        raise ValueError("the structure one-form must have degree 1")
    dtheta = exterior_derivative(theta)
    checks = {
        "contraction_reproduces_form": interior_product(delta, dtheta) == theta,
        "derivative_nondegenerate": not symbolic_determinant(two_form_matrix(dtheta)).is_zero,
    }
    return StructureReport(kind="cotangent", checks=checks, valid=all(checks.values()))


def validate_linear_structure(delta: VectorField, sample_count=8, sample_seed=42) -> StructureReport:
    """Dilation-field checks for a (partial) linear structure.

    Classifies each coordinate as invariant (L_Δ x = 0) or linear
    (L_Δ x = x); a valid structure has no coordinate outside these two
    classes and at least one linear coordinate.  The zero locus of Δ is
    only probed at sample points, never computed.
    """
    chart = delta.chart
    linear, invariant, other = [], [], []
    for name in chart.names:
        x = chart.coordinate(name)
        image = delta.apply(x)
        if image.is_zero:
            invariant.append(name)
        elif image == x:
            linear.append(name)
        else:
            other.append(name)
    points = sample_points(chart, list(delta.components), count=sample_count, seed=sample_seed)
    zero_samples = [
        pt for pt in points if all(c.evaluate(pt) == 0 for c in delta.components)
    ]
    checks = {
        "linear_coordinates": linear,
        "invariant_coordinates": invariant,
        "non_eigen_coordinates": other,
        "vanishes_at_sampled_points": [[str(x) for x in pt] for pt in zero_samples],
        "eigenvalue_conditions_hold": not other and bool(linear),
    }
    return StructureReport(
        kind="linear", checks=checks, valid=checks["eigenvalue_conditions_hold"]
    )


def validate_structures(kind: str, **objects) -> StructureReport:
    """Dispatch to one of the structure validators by kind name."""
    if kind == "tangent":
        return validate_tangent_structure(objects["tensor"], objects["delta"])
    if kind == "cotangent":
        return validate_cotangent_structure(objects["one_form"], objects["delta"])
    if kind == "linear":
        return validate_linear_structure(
            objects["delta"],
            sample_count=objects.get("sample_count", 8),
            sample_seed=objects.get("sample_seed", 42),
        )
    raise ValueError(f"unknown structure kind {kind!r}")
