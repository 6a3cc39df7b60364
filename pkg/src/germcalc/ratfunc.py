"""Rational functions over the Laurent ring: the fraction field K_n at desk scale.

Used where coefficients genuinely live in the function field: decomposing
fields over a generic-rank basis and the transition-matrix machinery.  No
multivariate gcd is attempted; normalization strips monomial content and
tries exact division, which is all the shipped instances need and keeps the
arithmetic honest (equality is decided by cross multiplication, which is
exact regardless of normalization).
"""

from __future__ import annotations

from .laurent import ExponentVector, LaurentPoly, grlex_key
from .scalars import Scalar


def monomial_split(p: LaurentPoly) -> tuple[ExponentVector, LaurentPoly]:
    """Factor p = x^shift * q where q is a polynomial whose per-variable
    minimum exponent is 0.  Zero splits as (0, 0)."""
    if p.is_zero():
        return (0,) * p.dim, p
    mins = [min(e[i] for e in p.terms) for i in range(p.dim)]
    shift = tuple(mins)
    if all(m == 0 for m in mins):
        return shift, p
    q = LaurentPoly(
        p.dim, {tuple(a - b for a, b in zip(e, shift)): c for e, c in p.terms.items()}
    )
    return shift, q


def leading_term(p: LaurentPoly) -> tuple[ExponentVector, Scalar]:
    """Graded-lex leading term of a nonzero polynomial."""
    exps = max(p.terms, key=grlex_key)
    return exps, p.terms[exps]


def poly_divide_exact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly | None:
    """a / b when b divides a exactly in the polynomial ring, else None.

    Plain leading-term elimination: when the division is exact the leading
    term of the remainder is always divisible by the leading term of b, so
    the loop either terminates with remainder 0 or proves non-divisibility.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return a
    lb, cb = leading_term(b)
    q = LaurentPoly.zero(a.dim)
    r = a
    while not r.is_zero():
        lr, cr = leading_term(r)
        exps = tuple(x - y for x, y in zip(lr, lb))
        if any(e < 0 for e in exps):
            return None
        t = LaurentPoly(a.dim, {exps: cr / cb})
        q = q + t
        r = r - t * b
    return q


def laurent_divide_exact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly | None:
    """a / b in the Laurent ring when exact, else None.  Monomial factors
    divide freely; only the primitive parts need polynomial division."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero")
    if a.is_zero():
        return a
    shift_a, pa = monomial_split(a)
    shift_b, pb = monomial_split(b)
    q = poly_divide_exact(pa, pb)
    if q is None:
        return None
    shift = tuple(x - y for x, y in zip(shift_a, shift_b))
    return q * LaurentPoly(a.dim, {shift: Scalar(1)})


class RationalFunction:
    """num/den with LaurentPoly parts, den != 0."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None):
        if den is None:
            den = LaurentPoly.one(num.dim)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.dim != den.dim:
            raise ValueError("numerator/denominator dimension mismatch")
        num, den = self._normalize(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @staticmethod
    def _normalize(num: LaurentPoly, den: LaurentPoly):
        if num.is_zero():
            return num, LaurentPoly.one(num.dim)
        q = laurent_divide_exact(num, den)
        if q is not None:
            return q, LaurentPoly.one(num.dim)
        # pull the denominator's monomial content and leading coefficient out
        shift, pden = monomial_split(den)
        _, lead = leading_term(pden)
        inv_monomial = LaurentPoly(den.dim, {tuple(-s for s in shift): Scalar(1) / lead})
        return num * inv_monomial, pden * (Scalar(1) / lead)

    @staticmethod
    def of(value, dim: int | None = None) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, LaurentPoly):
            return RationalFunction(value)
        if dim is None:
            raise ValueError("dim is required to lift a scalar")
        return RationalFunction(LaurentPoly.constant(dim, value))

    @property
    def dim(self) -> int:
        return self.num.dim

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den == LaurentPoly.one(self.dim)

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            q = laurent_divide_exact(self.num, self.den)
            if q is None:
                raise ValueError(f"{self!r} is not a Laurent polynomial")
            return q
        return self.num

    def __add__(self, other):
        other = RationalFunction.of(other, self.dim)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RationalFunction.of(other, self.dim))

    def __mul__(self, other):
        other = RationalFunction.of(other, self.dim)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalFunction.of(other, self.dim)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        if isinstance(other, (LaurentPoly, int, Scalar)):
            other = RationalFunction.of(other, self.dim)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("RationalFunction is unhashable (no canonical form)")

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"


def apply_field_rational(X, h: RationalFunction) -> RationalFunction:
    """Derivation extended to the fraction field by the quotient rule."""
    num, den = h.num, h.den
    return RationalFunction(
        X.apply(num) * den - num * X.apply(den), den * den
    )


def solve_rational(matrix, rhs) -> list[RationalFunction] | None:
    """Solve A x = b over the fraction field by Gaussian elimination.

    ``matrix`` is a list of rows of RationalFunction, ``rhs`` the right-hand
    column.  Returns None when the system is inconsistent; raises on an
    underdetermined consistent system (callers always supply independent
    columns).
    """
    rows = [list(r) + [b] for r, b in zip(matrix, rhs)]
    n_cols = len(matrix[0]) if matrix else 0
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n_cols):
        pivot = None
        for i in range(r, len(rows)):
            if not rows[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = RationalFunction.of(1, rows[r][c].dim) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append((r, c))
        r += 1
    for i in range(r, len(rows)):
        if not rows[i][-1].is_zero():
            return None
    if len(pivots) < n_cols:
        raise ValueError("underdetermined system: columns are not independent")
    solution = [RationalFunction.of(0, rhs[0].dim) for _ in range(n_cols)]
    for row_idx, col in pivots:
        solution[col] = rows[row_idx][-1]
    return solution
