"""Jet spaces: the monomial basis of m/m^(k+1) and the matrix actions on it.

A diffeomorphism acts on k-jets by g -> g o phi, a vector field by g -> X(g).
Columns of the matrices are indexed by the graded-lex monomial basis, so the
degree filtration makes diffeo actions block-triangular and nilpotent-field
actions nilpotent.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

from .laurent import ExponentVector, LaurentPoly, SubstitutionCache, grlex_key, substitute, validate_order
from .matrices import Matrix
from .scalars import Scalar


def jet_basis(dim: int, order: int) -> tuple[ExponentVector, ...]:
    """All monomial exponent vectors of total degree 1..order, graded-lex."""
    validate_order(order)
    basis: list[ExponentVector] = []
    for d in range(1, order + 1):
        exps = []
        for combo in combinations_with_replacement(range(dim), d):
            e = [0] * dim
            for i in combo:
                e[i] += 1
            exps.append(tuple(e))
        exps.sort(key=grlex_key)
        basis.extend(exps)
    return tuple(basis)


class JetMatrix:
    """A square matrix over the scalars indexed by the jet monomial basis."""

    __slots__ = ("dim", "order", "basis", "matrix")

    def __init__(self, dim: int, order: int, matrix: Matrix, basis=None):
        basis = tuple(basis) if basis is not None else jet_basis(dim, order)
        size = len(basis)
        if len(matrix) != size or any(len(row) != size for row in matrix):
            raise ValueError(f"jet matrix must be {size}x{size} for dim={dim}, order={order}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, name, value):
        raise AttributeError("JetMatrix is immutable")

    @property
    def size(self) -> int:
        return len(self.basis)

    def column_poly(self, exps: ExponentVector) -> LaurentPoly:
        """The image of a basis monomial, reassembled as a polynomial."""
        j = self.basis.index(tuple(exps))
        terms = {}
        for i, row in enumerate(self.matrix):
            if row[j]:
                terms[self.basis[i]] = row[j]
        return LaurentPoly(self.dim, terms)

    def __eq__(self, other):
        if not isinstance(other, JetMatrix):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.order == other.order
            and self.basis == other.basis
            and self.matrix == other.matrix
        )

    def __repr__(self):
        return f"JetMatrix(dim={self.dim}, order={self.order}, size={self.size})"

    def export_text(self) -> str:
        """Dense row-major listing preceded by the basis monomial header."""
        from .parsing import format_monomial_header, format_scalar

        lines = ["basis: " + format_monomial_header(self.basis)]
        for row in self.matrix:
            lines.append(" ".join(format_scalar(c) for c in row))
        return "\n".join(lines)


def poly_to_coords(g: LaurentPoly, basis, index: dict | None = None) -> list[Scalar]:
    if index is None:
        index = {e: i for i, e in enumerate(basis)}
    coords = [Scalar(0)] * len(basis)
    for exps, coeff in g.terms.items():
        if sum(exps) == 0:
            raise ValueError("jet coordinates are defined for elements of m only")
        coords[index[exps]] = coeff
    return coords


def to_jet_matrix(phi) -> JetMatrix:
    """Matrix of the action g -> g o phi on m/m^(order+1).

    Column j holds the coordinates of (basis monomial j) o phi.  With this
    convention the action is contravariant: the matrix of phi o psi equals
    matrix(psi) . matrix(phi).
    """
    basis = jet_basis(phi.dim, phi.order)
    index = {e: i for i, e in enumerate(basis)}
    size = len(basis)
    cols: list[list[Scalar]] = []
    cache = SubstitutionCache(phi.components, phi.order)
    for exps in basis:
        g = LaurentPoly(phi.dim, {exps: Scalar(1)})
        image = substitute(g, phi.components, phi.order, _cache=cache)
        cols.append(poly_to_coords(image, basis, index))
    matrix = [[cols[j][i] for j in range(size)] for i in range(size)]
    return JetMatrix(phi.dim, phi.order, matrix, basis)


def field_to_jet_matrix(X, order: int) -> JetMatrix:
    """Matrix of the derivation action g -> X(g) on m/m^(order+1).

    Requires a formal field so that the action preserves m.  The matrix of a
    bracket is the commutator of the matrices in operator order:
    matrix([X, Y]) = matrix(X) matrix(Y) - matrix(Y) matrix(X).
    """
    if not X.is_formal():
        raise ValueError("jet action is defined for formal fields only")
    validate_order(order)
    basis = jet_basis(X.dim, order)
    index = {e: i for i, e in enumerate(basis)}
    size = len(basis)
    cols = []
    for exps in basis:
        g = LaurentPoly(X.dim, {exps: Scalar(1)})
        image = X.apply(g).truncate(order)
        cols.append(poly_to_coords(image, basis, index))
    matrix = [[cols[j][i] for j in range(size)] for i in range(size)]
    return JetMatrix(X.dim, order, matrix, basis)
