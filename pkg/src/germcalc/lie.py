"""Lie-algebra structure computations for spans of vector fields.

Two computation modes:

* exact mode keeps coefficients untruncated (brackets of Laurent-polynomial
  fields stay Laurent-polynomial) and is the default for the finitely
  generated example algebras; a degree budget turns runaway growth into a
  loud error instead of a hang,
* jet(k) mode truncates every coefficient at total degree k and is required
  for infinite-dimensional inputs, where the jet order has to be certified by
  recomputing at k+1.

On top of span reduction and bracket closure this module computes derived and
descending central series, soluble length and nilpotency class, the generic
rank over the fraction field (kappa), and the transition matrices attached to
a basis split of a rank drop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .fields import BudgetExceededError, VectorField
from .laurent import LaurentPoly, grlex_key
from .ratfunc import RationalFunction, apply_field_rational, leading_term, solve_rational
from .scalars import Scalar
from .spans import SparseEchelon


class NonTerminatingMarker:
    """Singleton result for a series that stabilizes without dying.

    In jet mode the engine cannot distinguish a genuinely non-solvable (or
    non-nilpotent) algebra from an under-truncated one, so the marker says
    exactly that: non-terminating at this jet order.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NON_TERMINATING"


NON_TERMINATING = NonTerminatingMarker()

DEFAULT_DEGREE_BUDGET = 256


@dataclass(frozen=True)
class LieAlgebraSpan:
    """A finite scalar-basis of vector fields with mode metadata.

    The basis is always linearly independent: constructors run span
    reduction.  In jet mode every coefficient is truncated at the jet order.
    """

    dim: int
    mode: str  # "exact" | "jet"
    basis: tuple[VectorField, ...]
    order: int | None = None
    degree_budget: int = DEFAULT_DEGREE_BUDGET

    def __post_init__(self):
        if self.mode not in ("exact", "jet"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "jet" and self.order is None:
            raise ValueError("jet mode requires a jet order")

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def echelon(self) -> SparseEchelon:
        ech = SparseEchelon(VectorField.sparse_key)
        for X in self.basis:
            ech.insert(X.sparse())
        return ech

    def contains_field(self, X: VectorField) -> bool:
        X = self._prepare(X)
        return self.echelon().contains(X.sparse())

    def contains_span(self, other: "LieAlgebraSpan") -> bool:
        ech = self.echelon()
        return all(ech.contains(X.sparse()) for X in other.basis)

    def same_span(self, other: "LieAlgebraSpan") -> bool:
        return (
            self.dimension == other.dimension
            and self.contains_span(other)
        )

    def _prepare(self, X: VectorField) -> VectorField:
        if X.dim != self.dim:
            raise ValueError(f"dimension mismatch: {X.dim} vs {self.dim}")
        if self.mode == "jet":
            return X.truncate(self.order)
        if X.abs_degree() > self.degree_budget:
            raise BudgetExceededError(
                f"field degree {X.abs_degree()} exceeds budget {self.degree_budget}"
            )
        return X


def span_reduce(
    fields: Iterable[VectorField],
    mode: str = "exact",
    order: int | None = None,
    degree_budget: int = DEFAULT_DEGREE_BUDGET,
) -> LieAlgebraSpan:
    """A maximal linearly independent subset of the given fields, as a span.

    Jet mode tests independence of the truncated coefficient vectors.
    """
    fields = list(fields)
    dims = {X.dim for X in fields}
    if len(dims) > 1:
        raise ValueError(f"mixed dimensions in span: {sorted(dims)}")
    if not fields:
        raise ValueError("cannot infer dimension from an empty field list")
    dim = dims.pop()
    span = LieAlgebraSpan(dim, mode, (), order, degree_budget)
    ech = SparseEchelon(VectorField.sparse_key)
    kept = []
    for X in fields:
        Xp = span._prepare(X)
        if ech.insert(Xp.sparse()):
            kept.append(Xp)
    return LieAlgebraSpan(dim, mode, tuple(kept), order, degree_budget)


def _bracket_in_mode(span: LieAlgebraSpan, X: VectorField, Y: VectorField) -> VectorField:
    Z = X.bracket(Y)
    if span.mode == "jet":
        return Z.truncate(span.order)
    if Z.abs_degree() > span.degree_budget:
        raise BudgetExceededError(
            f"bracket degree {Z.abs_degree()} exceeds budget {span.degree_budget}"
        )
    return Z


def bracket_closure(
    gens: Sequence[VectorField],
    mode: str = "exact",
    order: int | None = None,
    degree_budget: int = DEFAULT_DEGREE_BUDGET,
) -> LieAlgebraSpan:
    """Smallest span containing the generators and closed under bracket.

    Saturation loop: bracket every new basis element against the whole
    current basis, insert what is independent, repeat until the dimension
    stabilizes.  In jet mode the dimension is bounded by n * dim(m/m^(k+1)),
    so termination is unconditional; in exact mode the degree budget guards
    against non-finite-dimensional inputs.
    """
    span = span_reduce(gens, mode, order, degree_budget)
    ech = span.echelon()
    basis = list(span.basis)
    frontier = list(basis)
    while frontier:
        new_frontier = []
        for X in frontier:
            for Y in basis:
                for Z in (_bracket_in_mode(span, X, Y),):
                    if not Z.is_zero() and ech.insert(Z.sparse()):
                        new_frontier.append(Z)
        basis.extend(new_frontier)
        frontier = new_frontier
    return LieAlgebraSpan(span.dim, mode, tuple(basis), order, degree_budget)


def generated_subalgebra(span: LieAlgebraSpan) -> LieAlgebraSpan:
    return bracket_closure(span.basis, span.mode, span.order, span.degree_budget)


def _pairwise_bracket_span(g: LieAlgebraSpan) -> LieAlgebraSpan:
    """Bracket closure of all pairwise brackets of g's basis."""
    brackets = []
    basis = g.basis
    for i, X in enumerate(basis):
        for Y in basis[i + 1:]:
            Z = _bracket_in_mode(g, X, Y)
            if not Z.is_zero():
                brackets.append(Z)
    if not brackets:
        return LieAlgebraSpan(g.dim, g.mode, (), g.order, g.degree_budget)
    return bracket_closure(brackets, g.mode, g.order, g.degree_budget)


def _mixed_bracket_span(g: LieAlgebraSpan, c: LieAlgebraSpan) -> LieAlgebraSpan:
    """Bracket closure of [g, c] for the central series step."""
    brackets = []
    for X in g.basis:
        for Y in c.basis:
            Z = _bracket_in_mode(g, X, Y)
            if not Z.is_zero():
                brackets.append(Z)
    if not brackets:
        return LieAlgebraSpan(g.dim, g.mode, (), g.order, g.degree_budget)
    return bracket_closure(brackets, g.mode, g.order, g.degree_budget)


def derived_series(g: LieAlgebraSpan, max_steps: int = 64) -> list[LieAlgebraSpan]:
    """g = g^(0), g^(1), ...  Stops at the zero span, or with two equal
    consecutive spans when the series stabilizes nonzero (the caller reads
    that tail as non-terminating at this jet order)."""
    levels = [g]
    while not levels[-1].is_zero():
        nxt = _pairwise_bracket_span(levels[-1])
        if nxt.same_span(levels[-1]):
            levels.append(nxt)
            return levels
        levels.append(nxt)
        if len(levels) > max_steps:
            raise BudgetExceededError("derived series exceeded the step budget")
    return levels


def central_series(g: LieAlgebraSpan, max_steps: int = 256) -> list[LieAlgebraSpan]:
    """g = C^0, C^1 = [g, C^0], ...  Same termination contract as
    derived_series."""
    levels = [g]
    while not levels[-1].is_zero():
        nxt = _mixed_bracket_span(g, levels[-1])
        if nxt.same_span(levels[-1]):
            levels.append(nxt)
            return levels
        levels.append(nxt)
        if len(levels) > max_steps:
            raise BudgetExceededError("central series exceeded the step budget")
    return levels


def series_terminates(levels: Sequence[LieAlgebraSpan]) -> bool:
    return levels[-1].is_zero()


def soluble_length(g: LieAlgebraSpan):
    """Index of the first zero term of the derived series, or the
    non-terminating marker."""
    levels = derived_series(g)
    if not series_terminates(levels):
        return NON_TERMINATING
    return len(levels) - 1


def nilpotency_class(g: LieAlgebraSpan):
    """First j with C^j g = 0, or the non-terminating marker."""
    levels = central_series(g)
    if not series_terminates(levels):
        return NON_TERMINATING
    return len(levels) - 1


def good_monomials(gens: Sequence[VectorField], max_depth: int) -> list[VectorField]:
    """All nonzero good monomials of degree <= max_depth.

    Degree-1 monomials are the generators; Y_(k1,...,kj) brackets the j-th
    generator onto the previous monomial, and the monomial is good when its
    first index is minimal.  Good monomials span the generated algebra, which
    makes this an independent oracle for the bracket-closure route.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    n = len(gens)
    out: list[VectorField] = []
    # level holds (first_index, field) for all nonzero monomials of the
    # current degree whose first index is still minimal so far
    level = [(k, gens[k]) for k in range(n) if not gens[k].is_zero()]
    out.extend(Y for _, Y in level)
    for _ in range(2, max_depth + 1):
        nxt = []
        for first, Y in level:
            for k in range(first, n):
                Z = gens[k].bracket(Y)
                if not Z.is_zero():
                    nxt.append((first, Z))
        out.extend(Y for _, Y in nxt)
        level = nxt
    return out


# -- generic rank over the fraction field ------------------------------------


def _clear_row(row: list[LaurentPoly]) -> list[LaurentPoly]:
    """Multiply a coefficient row by a monomial so all entries are polynomials
    (rank is invariant under scaling a row by a nonzero monomial)."""
    dim = row[0].dim
    shift = [0] * dim
    for p in row:
        for exps in p.terms:
            for i, e in enumerate(exps):
                if e < 0:
                    shift[i] = max(shift[i], -e)
    if not any(shift):
        return row
    m = LaurentPoly(dim, {tuple(shift): Scalar(1)})
    return [p * m for p in row]


def _grlex_leading_key(p: LaurentPoly):
    return grlex_key(leading_term(p)[0])


def generic_rank(fields_or_span) -> int:
    """Rank over the rational-function field of the coefficient matrix.

    Rows are the fields' coefficient tuples; negative exponents are cleared
    row by row with monomial factors.  Fraction-free Bareiss elimination with
    exact polynomial division keeps every intermediate entry a polynomial.
    Pivot rows are chosen by smallest graded-lex leading monomial of the
    pivot entry (then row order) for determinism.
    """
    if isinstance(fields_or_span, LieAlgebraSpan):
        fields = list(fields_or_span.basis)
        dim = fields_or_span.dim
    else:
        fields = list(fields_or_span)
        if not fields:
            raise ValueError("generic rank of an empty family is undefined")
        dim = fields[0].dim
    rows = [_clear_row(list(X.coeffs)) for X in fields if not X.is_zero()]
    if not rows:
        return 0

    from .ratfunc import poly_divide_exact

    rank = 0
    prev_pivot = LaurentPoly.one(dim)
    col = 0
    while col < dim and rank < len(rows):
        candidates = [
            i for i in range(rank, len(rows)) if not rows[i][col].is_zero()
        ]
        if not candidates:
            col += 1
            continue
        best = min(candidates, key=lambda i: (_grlex_leading_key(rows[i][col]), i))
        rows[rank], rows[best] = rows[best], rows[rank]
        pivot_row = rows[rank]
        pivot = pivot_row[col]
        for i in range(rank + 1, len(rows)):
            if all(p.is_zero() for p in rows[i]):
                continue
            row = rows[i]
            new_row = []
            for j in range(dim):
                if j <= col:
                    new_row.append(LaurentPoly.zero(dim))
                    continue
                num = pivot * row[j] - row[col] * pivot_row[j]
                q = poly_divide_exact(num, prev_pivot)
                if q is None:
                    raise ArithmeticError("Bareiss exact division failed")
                new_row.append(q)
            rows[i] = new_row
        prev_pivot = pivot
        rank += 1
        col += 1
    return rank


@dataclass(frozen=True)
class KappaSequence:
    """The generic ranks kappa(0), kappa(1), ... along the derived series."""

    values: tuple[int, ...]
    jet_order: int | None

    def __post_init__(self):
        vals = self.values
        if any(vals[i + 1] > vals[i] for i in range(len(vals) - 1)):
            raise ValueError(f"kappa sequence must be non-increasing: {vals}")

    def strict_two_step_drop(self) -> bool:
        """kappa(p+2) < kappa(p) whenever kappa(p) > 0 (indices past the end
        of the terminated series count as 0)."""
        vals = self.values

        def at(i: int) -> int:
            return vals[i] if i < len(vals) else 0

        return all(
            at(p + 2) < at(p) for p in range(len(vals)) if at(p) > 0
        )


def kappa_sequence(g: LieAlgebraSpan) -> KappaSequence:
    """Generic rank of every derived-series term.  Requires the series to
    terminate at the working jet order."""
    levels = derived_series(g)
    if not series_terminates(levels):
        raise BudgetExceededError(
            "derived series does not terminate at this jet order; kappa undefined"
        )
    return KappaSequence(
        tuple(generic_rank(level) if level.basis else 0 for level in levels),
        g.order,
    )


# -- transition matrices -------------------------------------------------------


@dataclass(frozen=True)
class BasisSplit:
    """Function-field basis {Y_1..Y_q} + {X_1..X_m} of a space of fields,
    with the Y part spanning the deeper derived term."""

    ys: tuple[VectorField, ...]
    xs: tuple[VectorField, ...]

    def __post_init__(self):
        if not self.xs:
            raise ValueError("degenerate split: no X part")
        dims = {f.dim for f in self.ys} | {f.dim for f in self.xs}
        if len(dims) != 1:
            raise ValueError("split fields have mixed dimensions")


@dataclass(frozen=True)
class TransitionMatrix:
    """Matrix with entry (j, k) = X_j(a_k), where the a's are the
    X-coefficients of the decomposed field."""

    entries: tuple[tuple[LaurentPoly, ...], ...]
    split: BasisSplit

    @property
    def size(self) -> int:
        return len(self.entries)


def decompose_over_split(Z: VectorField, split: BasisSplit) -> tuple[list[RationalFunction], list[RationalFunction]]:
    """Coefficients (b_1..b_q, a_1..a_m) with Z = sum b_j Y_j + sum a_k X_k
    over the fraction field.  Raises ValueError when Z is not in the span."""
    fields = list(split.ys) + list(split.xs)
    dim = Z.dim
    matrix = [
        [RationalFunction(F.coeffs[i]) for F in fields]
        for i in range(dim)
    ]
    rhs = [RationalFunction(Z.coeffs[i]) for i in range(dim)]
    solution = solve_rational(matrix, rhs)
    if solution is None:
        raise ValueError("field does not lie in the span of the split basis")
    q = len(split.ys)
    return solution[:q], solution[q:]


def transition_matrix(Z: VectorField, split: BasisSplit) -> TransitionMatrix:
    """The matrix (X_j(a_k)) of the decomposition of Z over the split.

    Entries are returned as Laurent polynomials: they are first integrals
    of the deeper algebra and in every shipped instance they simplify
    exactly.  A genuinely non-Laurent entry raises, loudly.
    """
    _, a_coeffs = decompose_over_split(Z, split)
    rows = []
    for Xj in split.xs:
        row = []
        for ak in a_coeffs:
            row.append(apply_field_rational(Xj, ak).as_laurent())
        rows.append(tuple(row))
    return TransitionMatrix(tuple(rows), split)


def span_export_text(g: LieAlgebraSpan) -> str:
    """Textual span export: a mode/order header plus one field per line in
    the grammar the parser accepts."""
    from .parsing import format_field

    header = f"mode {g.mode}" + (f" order {g.order}" if g.mode == "jet" else "")
    lines = [f"dim {g.dim}", header]
    lines.extend(f"field {format_field(X)}" for X in g.basis)
    return "\n".join(lines)


def span_from_text(text: str) -> LieAlgebraSpan:
    from .parsing import parse_field

    dim = None
    mode = "exact"
    order = None
    fields: list[VectorField] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        if key == "dim":
            dim = int(rest)
        elif key == "mode":
            parts = rest.split()
            mode = parts[0]
            if len(parts) == 3 and parts[1] == "order":
                order = int(parts[2])
        elif key == "field":
            if dim is None:
                raise ValueError("span text must declare dim before fields")
            fields.append(parse_field(rest, dim))
        else:
            raise ValueError(f"unknown span line {line!r}")
    if dim is None:
        raise ValueError("span text missing dim")
    if not fields:
        return LieAlgebraSpan(dim, mode, (), order)
    return span_reduce(fields, mode, order)


def transition_commutator(a: TransitionMatrix, b: TransitionMatrix) -> tuple[tuple[LaurentPoly, ...], ...]:
    """[M_a, M_b] = M_a M_b - M_b M_a entrywise over the Laurent ring."""
    m = a.size
    out = []
    for i in range(m):
        row = []
        for j in range(m):
            s = LaurentPoly.zero(a.entries[0][0].dim)
            for k in range(m):
                s = s + a.entries[i][k] * b.entries[k][j] - b.entries[i][k] * a.entries[k][j]
            row.append(s)
        out.append(tuple(row))
    return tuple(out)
