"""Constructors for the three explicit example families.

* the planar unipotent family with prescribed nilpotency class
  (x + P(y))/(1+ty)^k in the first slot, a Moebius map in the second,
* the solvable chain: monomial generating sets for the nested spaces
  U_1, V_1, ..., U_n, V_n and their partial sums, plus the group-level
  generators (triangular shape with a Moebius last component),
* the commuting meromorphic family u_k / X_k / Z_k whose generated Lie
  algebra realizes soluble length n with nilpotency class 3*2^(n-2)-1.

Everything is exact; the only truncation happens where a diffeomorphism is
materialized at a jet order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .diffeos import FormalDiffeo
from .fields import VectorField
from .laurent import LaurentPoly, validate_order
from .lie import LieAlgebraSpan, span_reduce
from .scalars import Scalar


# -- small series helpers -----------------------------------------------------


def geometric_inverse_power(dim: int, var: int, t: Scalar, power: int, order: int) -> LaurentPoly:
    """(1 + t*x_var)^(-power) as a truncated series."""
    base = LaurentPoly.one(dim)
    step = LaurentPoly.monomial(dim, {var: 1}, -t)  # expansion of 1/(1+t x) = sum (-t x)^j
    geom = LaurentPoly.one(dim)
    for _ in range(order):
        geom = geom.mul_truncated(step, order) + base
    out = LaurentPoly.one(dim)
    for _ in range(power):
        out = out.mul_truncated(geom, order)
    return out


def moebius_component(dim: int, var: int, lam: Scalar, mu: Scalar, order: int) -> LaurentPoly:
    """lambda * x_var / (1 + mu * x_var) truncated at order."""
    if not lam:
        raise ValueError("the multiplier lambda must be nonzero")
    x = LaurentPoly.monomial(dim, {var: 1}, lam)
    return x.mul_truncated(geometric_inverse_power(dim, var, mu, 1, order), order)


# -- the planar family with prescribed nilpotency class ------------------------


def build_intro_family(
    k_param: int,
    members: Sequence[tuple[LaurentPoly, Scalar]],
    order: int,
) -> list[FormalDiffeo]:
    """Members ((x + P(y))/(1+ty)^k, y/(1+ty)) of the planar unipotent family.

    Each entry of ``members`` is (P, t) with P a polynomial in the second
    variable, P in (y^2), deg P <= k_param.
    """
    if k_param < 2:
        raise ValueError("the family parameter must be >= 2")
    validate_order(order)
    out = []
    for P, t in members:
        out.append(intro_member(k_param, P, Scalar.of(t), order))
    return out


def intro_member(k_param: int, P: LaurentPoly, t: Scalar, order: int) -> FormalDiffeo:
    if P.dim != 2:
        raise ValueError("P must live in two variables (as a polynomial in y)")
    if not P.is_polynomial():
        raise ValueError("P must be a polynomial")
    for exps in P.terms:
        if exps[0] != 0:
            raise ValueError("P may only involve the second variable")
        if exps[1] < 2:
            raise ValueError("P must lie in (y^2)")
        if exps[1] > k_param:
            raise ValueError(f"deg P must be <= {k_param}")
    x = LaurentPoly.variable(2, 1)
    denom = geometric_inverse_power(2, 2, t, k_param, order)
    first = (x + P).mul_truncated(denom, order)
    second = moebius_component(2, 2, Scalar(1), t, order)
    return FormalDiffeo([first, second], order)


def random_intro_member(rng, k_param: int, order: int) -> FormalDiffeo:
    """A pseudo-random family member with small rational parameters."""
    pool = [-2, -1, 1, 2, 0, 0]
    terms = {}
    for d in range(2, k_param + 1):
        c = rng.choice(pool)
        if c:
            terms[(0, d)] = Scalar.rational(c, rng.choice([1, 2]))
    P = LaurentPoly(2, terms)
    t = Scalar.rational(rng.choice(pool), rng.choice([1, 2]))
    return intro_member(k_param, P, t, order)


# -- the solvable chain ---------------------------------------------------------


def _monomials_in_tail_vars(dim: int, start_var: int, min_deg: int, max_deg: int):
    """Exponent vectors supported on x_start_var..x_dim with total degree in
    [min_deg, max_deg]."""
    tail = list(range(start_var - 1, dim))

    def rec(pos: int, remaining: int):
        if pos == len(tail) - 1:
            yield {tail[pos]: remaining}
            return
        for e in range(remaining + 1):
            for rest in rec(pos + 1, remaining - e):
                rest = dict(rest)
                rest[tail[pos]] = e
                yield rest

    for d in range(min_deg, max_deg + 1):
        if d == 0:
            yield (0,) * dim
            continue
        for assignment in rec(0, d):
            vec = [0] * dim
            for i, e in assignment.items():
                vec[i] = e
            yield tuple(vec)


def chain_space_generators(dim: int, kind: str, j: int, order: int) -> list[VectorField]:
    """Monomial generators, up to total degree ``order``, of the j-th summand.

    kind "U": a(x_(j+1),...,x_n) d/dx_j with a in m^2 (for j = n the single
    field x_n^2 d/dx_n); kind "V": x_j b(x_(j+1),...,x_n) d/dx_j with b in m
    (for j = n the single field x_n d/dx_n).
    """
    if not 1 <= j <= dim:
        raise ValueError(f"summand index {j} out of range 1..{dim}")
    out = []
    if j == dim:
        exps = {dim: 2} if kind == "U" else {dim: 1}
        return [VectorField.from_terms(dim, (LaurentPoly.monomial(dim, exps), dim))]
    if kind == "U":
        for vec in _monomials_in_tail_vars(dim, j + 1, 2, order):
            out.append(VectorField.from_terms(dim, (LaurentPoly(dim, {vec: Scalar(1)}), j)))
    elif kind == "V":
        for vec in _monomials_in_tail_vars(dim, j + 1, 1, order - 1):
            full = list(vec)
            full[j - 1] += 1
            out.append(
                VectorField.from_terms(dim, (LaurentPoly(dim, {tuple(full): Scalar(1)}), j))
            )
    else:
        raise ValueError(f"unknown summand kind {kind!r}")
    return out


def chain_summands(dim: int, index: int) -> list[tuple[str, int]]:
    """The (kind, j) summands of the chain space with the given index.

    Index 2n is the zero space; dropping the index by one appends the next
    summand, alternating U then V: index 2n-1 is U_1, index 2n-2 is
    U_1 + V_1, down to index 0 = U_1 + V_1 + ... + U_n + V_n.
    """
    if not 0 <= index <= 2 * dim:
        raise ValueError(f"chain index {index} out of range 0..{2 * dim}")
    count = 2 * dim - index  # how many summands are present
    out = []
    for pos in range(count):
        j = pos // 2 + 1
        out.append(("U" if pos % 2 == 0 else "V", j))
    return out


def build_chain_algebra(dim: int, index: int, order: int) -> LieAlgebraSpan:
    """Jet-mode span generated by all monomial generators of the chain space."""
    validate_order(order)
    gens: list[VectorField] = []
    for kind, j in chain_summands(dim, index):
        gens.extend(chain_space_generators(dim, kind, j, order))
    if not gens:
        return LieAlgebraSpan(dim, "jet", (), order)
    return span_reduce(gens, "jet", order)


def chain_exponent(j: int) -> int:
    """The exponent c_j = 2^j + 2^(j-2) - 2 controlling how deep the j-th
    derived algebra still contains a monomial copy of the j-th chain space."""
    if j < 2:
        raise ValueError("chain exponents are defined for j >= 2")
    return 2 ** j + 2 ** (j - 2) - 2


def default_solvable_order(dim: int) -> int:
    """Default jet order for the solvable-chain verification."""
    if dim == 1:
        return 6
    return chain_exponent(2 * dim - 1) + 3


# -- group-level generators ------------------------------------------------------


@dataclass(frozen=True)
class TriangularGeneratorSpec:
    """Data for one group generator: per-variable shift/scale series and the
    Moebius parameters of the last component."""

    a: tuple[LaurentPoly, ...]  # a_j in m^2, depending on x_(j+1).. only
    b: tuple[LaurentPoly, ...]  # b_j with b_j - 1 in m, same variable support
    lam: Scalar
    mu: Scalar


def build_triangular_generator(spec: TriangularGeneratorSpec, dim: int, order: int) -> FormalDiffeo:
    """One element of the triangular group: component j is
    a_j + x_j b_j for j < n and a Moebius map in x_n last."""
    validate_order(order)
    if len(spec.a) != dim - 1 or len(spec.b) != dim - 1:
        raise ValueError(f"expected {dim - 1} shift/scale entries for dimension {dim}")
    comps = []
    for j in range(1, dim):
        a, b = spec.a[j - 1], spec.b[j - 1]
        _check_tail_support(a, j, dim, min_degree=2)
        _check_tail_support(b - LaurentPoly.one(dim), j, dim, min_degree=1)
        xj = LaurentPoly.variable(dim, j)
        comps.append((a + xj.mul_truncated(b, order)).truncate(order))
    comps.append(moebius_component(dim, dim, spec.lam, spec.mu, order))
    return FormalDiffeo(comps, order)


def _check_tail_support(p: LaurentPoly, j: int, dim: int, min_degree: int):
    for exps in p.terms:
        if any(exps[i] for i in range(j)):
            raise ValueError(
                f"component {j}: series may only depend on variables after x{j}"
            )
        if sum(exps) < min_degree:
            raise ValueError(f"component {j}: series must lie in m^{min_degree}")


def build_triangular_generators(
    specs: Sequence[TriangularGeneratorSpec], dim: int, order: int
) -> list[FormalDiffeo]:
    return [build_triangular_generator(s, dim, order) for s in specs]


# -- the nilpotent family ----------------------------------------------------------


def nilpotent_seed_functions(dim: int) -> list[LaurentPoly]:
    """u_1, ..., u_(n-1): u_(n-1) = x_n^(-1) and
    u_(n-k) = x_(n-k+1)^(-2) * u_(n-k+1)^2."""
    if dim < 2:
        raise ValueError("the nilpotent family needs dimension >= 2")
    us: dict[int, LaurentPoly] = {dim - 1: LaurentPoly.monomial(dim, {dim: -1})}
    for k in range(2, dim):
        idx = dim - k
        us[idx] = LaurentPoly.monomial(dim, {idx + 1: -2}) * (us[idx + 1] ** 2)
    return [us[i] for i in range(1, dim)]


def nilpotent_generator_fields(dim: int) -> list[VectorField]:
    """The polynomial generators Z_1, ..., Z_n of the nilpotent example.

    Z_k is u_k X_k, which cancels the u_k^(-1) prefactor and leaves the
    polynomial part; Z_n = X_n.  The generic last-field pattern
    -x_(n-1) x_n d(n-1) + x_n^2 dn only commutes with the rest of the family
    for n >= 4; at n = 2 and n = 3 the unique fields of the same monomial
    shape that make the whole family commute are

        n = 2:  3 x1 x2 d1 + x2^2 d2
        n = 3:  -2 x1 x3 d1 - x2 x3 d2 + x3^2 d3

    and with these the commutation/first-integral package (and the resulting
    lengths and classes) checks out exactly.
    """
    if dim < 2:
        raise ValueError("the nilpotent family needs dimension >= 2")
    n = dim
    fields: list[VectorField] = []
    # Z_1 = x2^2 d1 in every dimension
    fields.append(VectorField.from_terms(n, (LaurentPoly.monomial(n, {2: 2}), 1)))
    if n == 2:
        fields.append(
            VectorField.from_terms(
                2,
                (LaurentPoly.monomial(2, {1: 1, 2: 1}, 3), 1),
                (LaurentPoly.monomial(2, {2: 2}), 2),
            )
        )
        return fields
    # Z_2 = 4 x1 x2 d1 + x2^2 d2
    fields.append(
        VectorField.from_terms(
            n,
            (LaurentPoly.monomial(n, {1: 1, 2: 1}, 4), 1),
            (LaurentPoly.monomial(n, {2: 2}), 2),
        )
    )
    if n == 3:
        fields.append(
            VectorField.from_terms(
                3,
                (LaurentPoly.monomial(3, {1: 1, 3: 1}, -2), 1),
                (LaurentPoly.monomial(3, {2: 1, 3: 1}, -1), 2),
                (LaurentPoly.monomial(3, {3: 2}), 3),
            )
        )
        return fields
    # Z_3 = -4 x1 x3 d1 - 2 x2 x3 d2 + x3^2 d3
    fields.append(
        VectorField.from_terms(
            n,
            (LaurentPoly.monomial(n, {1: 1, 3: 1}, -4), 1),
            (LaurentPoly.monomial(n, {2: 1, 3: 1}, -2), 2),
            (LaurentPoly.monomial(n, {3: 2}), 3),
        )
    )
    # Z_k = -2 x_(k-1) x_k d(k-1) + x_k^2 dk for 4 <= k <= n-1
    for k in range(4, n):
        fields.append(
            VectorField.from_terms(
                n,
                (LaurentPoly.monomial(n, {k - 1: 1, k: 1}, -2), k - 1),
                (LaurentPoly.monomial(n, {k: 2}), k),
            )
        )
    # Z_n = -x_(n-1) x_n d(n-1) + x_n^2 dn
    fields.append(
        VectorField.from_terms(
            n,
            (LaurentPoly.monomial(n, {n - 1: 1, n: 1}, -1), n - 1),
            (LaurentPoly.monomial(n, {n: 2}), n),
        )
    )
    return fields


def build_nilpotent_example(dim: int):
    """(u functions, X fields, Z fields) of the nilpotent family.

    X_k = u_k^(-1) Z_k for k < n (Laurent coefficients), X_n = Z_n; the Z's
    are verified polynomial by construction.
    """
    us = nilpotent_seed_functions(dim)
    zs = nilpotent_generator_fields(dim)
    xs = []
    for k, Z in enumerate(zs, start=1):
        if k < dim:
            u_inv = us[k - 1].monomial_inverse()
            xs.append(VectorField([u_inv * c for c in Z.coeffs]))
        else:
            xs.append(Z)
    return us, xs, zs


def expected_nilpotency_class(dim: int) -> int:
    """3 * 2^(n-2) - 1."""
    return 3 * 2 ** (dim - 2) - 1


def expected_a_value(dim: int, k: int) -> int:
    """a(u_(n-k)) = 3 * 2^(k-1) - 2 for 1 <= k <= n-1."""
    if not 1 <= k <= dim - 1:
        raise ValueError(f"k = {k} out of range 1..{dim - 1}")
    return 3 * 2 ** (k - 1) - 2


def chain_composition_value(dim: int, k: int) -> LaurentPoly:
    """The maximal-length composite applied to u_(n-k):

        Z_n^(2^(k-1)) o Z_(n-1)^(2^(k-1)) o Z_(n-2)^(2^(k-2)) o ...
            o Z_(n-k+2)^(2^2) o Z_(n-k+1)^2   applied to u_(n-k),

    a composition of exactly 3*2^(k-1) - 2 derivations.  The family realizes
    its nilpotency class iff this evaluates to a nonzero constant.
    """
    us, _, zs = build_nilpotent_example(dim)
    if not 1 <= k <= dim - 1:
        raise ValueError(f"k = {k} out of range 1..{dim - 1}")
    v = us[dim - k - 1]  # u_(n-k)
    if k == 1:
        return zs[dim - 1].apply(v)
    # apply right-to-left: Z_(n-k+1)^2 first, then rising powers, then the
    # top two indices both at 2^(k-1)
    plan: list[tuple[int, int]] = [(dim - k + 1, 2)]
    for idx in range(dim - k + 2, dim - 1):
        plan.append((idx, 2 ** (idx - (dim - k))))
    if dim - 1 >= dim - k + 2:
        plan.append((dim - 1, 2 ** (k - 1)))
    plan.append((dim, 2 ** (k - 1)))
    for idx, power in plan:
        Z = zs[idx - 1]
        for _ in range(power):
            v = Z.apply(v)
    return v
