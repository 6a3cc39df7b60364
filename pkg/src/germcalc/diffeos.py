"""Formal diffeomorphism germs fixing the origin, truncated at a jet order.

The group side of the engine: composition, inversion, group commutators and
commutator words, the exponential of a nilpotent formal field and the
logarithm of a unipotent diffeomorphism.

Composition convention, pinned once and for all:

    compose(phi, psi) = phi o psi,

i.e. component i of the result is substitute(phi_i, psi.components).  Every
matrix identity in jets.py is stated against this convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .fields import VectorField
from .laurent import LaurentPoly, SubstitutionCache, substitute, validate_order
from .matrices import (
    identity as mat_identity,
    is_nilpotent_matrix,
    is_zero_matrix,
    mat_inverse,
    mat_sub,
)
from .scalars import Scalar


class FormalDiffeo:
    """A truncated formal diffeomorphism: components have zero constant term,
    no negative exponents, degree <= order, and an invertible linear part."""

    __slots__ = ("dim", "order", "components")

    def __init__(self, components: Sequence[LaurentPoly], order: int):
        validate_order(order)
        components = tuple(components)
        if not components:
            raise ValueError("a diffeomorphism needs at least one component")
        dim = components[0].dim
        if len(components) != dim:
            raise ValueError(f"expected {dim} components, got {len(components)}")
        for i, comp in enumerate(components, start=1):
            if comp.dim != dim:
                raise ValueError("component dimensions disagree")
            if not comp.is_polynomial():
                raise ValueError(f"component {i} has negative exponents")
            if comp.constant_term():
                raise ValueError(f"component {i} has a nonzero constant term")
        components = tuple(c.truncate(order) for c in components)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "components", components)
        try:
            mat_inverse(self.linear_part())
        except ValueError:
            raise ValueError("linear part is not invertible") from None

    def __setattr__(self, name, value):
        raise AttributeError("FormalDiffeo is immutable")

    # -- constructors --------------------------------------------------------

    @staticmethod
    def identity(dim: int, order: int) -> "FormalDiffeo":
        return FormalDiffeo(
            [LaurentPoly.variable(dim, i) for i in range(1, dim + 1)], order
        )

    @staticmethod
    def linear(matrix, order: int) -> "FormalDiffeo":
        n = len(matrix)
        comps = []
        for i in range(n):
            p = LaurentPoly.zero(n)
            for j in range(n):
                if matrix[i][j]:
                    p = p + LaurentPoly.monomial(n, {j + 1: 1}, matrix[i][j])
            comps.append(p)
        return FormalDiffeo(comps, order)

    # -- structure -----------------------------------------------------------

    def linear_part(self):
        n = self.dim
        rows = []
        for comp in self.components:
            row = []
            for j in range(n):
                e = [0] * n
                e[j] = 1
                row.append(comp.coefficient(tuple(e)))
            rows.append(row)
        return rows

    def is_identity(self) -> bool:
        return self == FormalDiffeo.identity(self.dim, self.order)

    def is_unipotent(self) -> bool:
        """True iff the linear part minus the identity is nilpotent."""
        return is_nilpotent_matrix(mat_sub(self.linear_part(), mat_identity(self.dim)))

    def is_tangent_to_identity(self) -> bool:
        return is_zero_matrix(mat_sub(self.linear_part(), mat_identity(self.dim)))

    def with_order(self, order: int) -> "FormalDiffeo":
        if order > self.order:
            raise ValueError("cannot extend a truncated diffeomorphism to higher order")
        return FormalDiffeo(self.components, order)

    # -- group operations ------------------------------------------------------

    def _check_compatible(self, other: "FormalDiffeo"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if self.order != other.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")

    def compose(self, other: "FormalDiffeo") -> "FormalDiffeo":
        """self o other."""
        self._check_compatible(other)
        cache = SubstitutionCache(other.components, self.order)
        return FormalDiffeo(
            [
                substitute(comp, other.components, self.order, _cache=cache)
                for comp in self.components
            ],
            self.order,
        )

    def invert(self) -> "FormalDiffeo":
        """The inverse jet, solved degree by degree.

        With psi correct through degree d-1, the error r = self o psi - id
        starts at degree d and the linear part A of self acts on the degree-d
        correction, so psi -= A^{-1} r_d fixes degree d without disturbing
        lower degrees.
        """
        n, k = self.dim, self.order
        a_inv = mat_inverse(self.linear_part())
        psi = FormalDiffeo.linear(a_inv, k)
        ident = FormalDiffeo.identity(n, k)
        for d in range(2, k + 1):
            err = [
                c - i
                for c, i in zip(self.compose(psi).components, ident.components)
            ]
            correction = [e.degree_part(d) for e in err]
            if all(c.is_zero() for c in correction):
                continue
            new_comps = []
            for i in range(n):
                delta = LaurentPoly.zero(n)
                for j in range(n):
                    if a_inv[i][j]:
                        delta = delta + correction[j] * a_inv[i][j]
                new_comps.append(psi.components[i] - delta)
            psi = FormalDiffeo(new_comps, k)
        return psi

    def commutator(self, other: "FormalDiffeo") -> "FormalDiffeo":
        """Group commutator a o b o a^-1 o b^-1."""
        self._check_compatible(other)
        return self.compose(other).compose(self.invert()).compose(other.invert())

    # -- comparison ------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FormalDiffeo):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.order == other.order
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.dim, self.order, self.components))

    def __repr__(self):
        return f"FormalDiffeo(dim={self.dim}, order={self.order}, {list(self.components)!r})"

    def __str__(self):
        from .parsing import format_diffeo

        return format_diffeo(self)


def compose(phi: FormalDiffeo, psi: FormalDiffeo) -> FormalDiffeo:
    return phi.compose(psi)


def invert(phi: FormalDiffeo) -> FormalDiffeo:
    return phi.invert()


def group_commutator(a: FormalDiffeo, b: FormalDiffeo) -> FormalDiffeo:
    return a.commutator(b)


# -- exponential and logarithm -------------------------------------------------


def exp_field(X: VectorField, t, order: int) -> FormalDiffeo:
    """The time-t exponential of a nilpotent formal field, truncated at order.

    Component i is sum_j t^j/j! X^j(x_i).  Nilpotency of the linear part makes
    the jet action nilpotent, so the sum terminates; for a non-nilpotent field
    the coefficients would be transcendental in t and the whole construction
    leaves the exact scalar field, hence the hard precondition.
    """
    validate_order(order)
    if not X.is_formal():
        raise ValueError("exp is defined for formal fields only")
    if not X.is_nilpotent():
        raise ValueError("exp is only computed for nilpotent fields (finite jet sums)")
    t = Scalar.of(t)
    comps = []
    # nilpotency index of the jet action is bounded by the jet dimension
    from .jets import jet_basis

    cap = len(jet_basis(X.dim, order)) + 1
    for i in range(1, X.dim + 1):
        term = LaurentPoly.variable(X.dim, i)
        acc = term
        tpow = Scalar(1)
        fact = 1
        for j in range(1, cap + 1):
            term = X.apply(term).truncate(order)
            if term.is_zero():
                break
            tpow = tpow * t
            fact *= j
            acc = acc + term * (tpow / Scalar.rational(fact))
        else:
            raise ArithmeticError("exponential sum failed to terminate")
        comps.append(acc)
    return FormalDiffeo(comps, order)


def log_diffeo(phi: FormalDiffeo) -> VectorField:
    """The infinitesimal generator of a unipotent diffeomorphism, truncated.

    This is the jet-action logarithm: with M the matrix of g -> g o phi on
    m/m^(order+1), the derivation log(M) is a finite alternating sum because
    M - I is nilpotent, and the field's i-th coefficient is the polynomial
    log(M)(x_i).  We never materialize M: (M - I)^j applied to x_i is computed
    by iterating g -> g o phi - g with a shared substitution cache, which is
    the same columns at a fraction of the cost.

    exp_field(log_diffeo(phi), 1, order) == phi at the stored order.
    """
    if not phi.is_unipotent():
        raise ValueError("log is defined for unipotent diffeomorphisms only")
    n, k = phi.dim, phi.order
    cache = SubstitutionCache(phi.components, k)
    from .jets import jet_basis

    cap = len(jet_basis(n, k)) + 1
    coeffs = []
    for i in range(1, n + 1):
        w = LaurentPoly.variable(n, i)
        acc = LaurentPoly.zero(n)
        for j in range(1, cap + 1):
            w = substitute(w, phi.components, k, _cache=cache) - w
            if w.is_zero():
                break
            sign = Scalar(1) if j % 2 == 1 else Scalar(-1)
            acc = acc + w * (sign / Scalar.rational(j))
        else:
            raise ArithmeticError("logarithm sum failed to terminate")
        coeffs.append(acc)
    return VectorField(coeffs)


# -- commutator words ------------------------------------------------------------


@dataclass(frozen=True)
class WordLeaf:
    """A generator reference, optionally inverted."""

    index: int
    inverse: bool = False


@dataclass(frozen=True)
class WordComm:
    """The group-commutator node [left, right]."""

    left: "CommutatorWord"
    right: "CommutatorWord"


CommutatorWord = WordLeaf | WordComm


def word_depth(word: CommutatorWord) -> int:
    """Commutator depth: leaves are 0, a node is 1 + min of its children.

    A depth-d word always evaluates into the d-th derived group.
    """
    if isinstance(word, WordLeaf):
        return 0
    return 1 + min(word_depth(word.left), word_depth(word.right))


def evaluate_word(word: CommutatorWord, gens: Sequence[FormalDiffeo]) -> FormalDiffeo:
    """Evaluate a commutator word over the given generators."""
    if isinstance(word, WordLeaf):
        if not 0 <= word.index < len(gens):
            raise ValueError(f"word leaf index {word.index} out of range")
        g = gens[word.index]
        return g.invert() if word.inverse else g
    return evaluate_word(word.left, gens).commutator(evaluate_word(word.right, gens))
