import pytest

from germcalc.diffeos import FormalDiffeo
from germcalc.fields import VectorField
from germcalc.laurent import LaurentPoly
from germcalc.scalars import Scalar
from germcalc.families import (
    TriangularGeneratorSpec,
    build_triangular_generator,
    build_intro_family,
    build_nilpotent_example,
    build_chain_algebra,
    chain_composition_value,
    chain_exponent,
    expected_a_value,
    expected_nilpotency_class,
    intro_member,
    moebius_component,
    nilpotent_seed_functions,
    chain_summands,
)


def test_intro_family_identity_member():
    (phi,) = build_intro_family(2, [(LaurentPoly.zero(2), Scalar(0))], 4)
    assert phi == FormalDiffeo.identity(2, 4)


def test_intro_family_pure_shift():
    (phi,) = build_intro_family(2, [(LaurentPoly.monomial(2, {2: 2}), Scalar(0))], 4)
    x1, x2 = LaurentPoly.variable(2, 1), LaurentPoly.variable(2, 2)
    assert phi == FormalDiffeo([x1 + x2 ** 2, x2], 4)


def test_intro_family_geometric_expansion():
    (phi,) = build_intro_family(2, [(LaurentPoly.zero(2), Scalar(1))], 4)
    x1, x2 = LaurentPoly.variable(2, 1), LaurentPoly.variable(2, 2)
    first = x1 * (LaurentPoly.one(2) - x2 * 2 + x2 ** 2 * 3 - x2 ** 3 * 4)
    second = x2 - x2 ** 2 + x2 ** 3 - x2 ** 4
    assert phi == FormalDiffeo([first.truncate(4), second], 4)


def test_intro_member_validation():
    with pytest.raises(ValueError):
        intro_member(3, LaurentPoly.variable(2, 2), Scalar(0), 5)  # linear term
    with pytest.raises(ValueError):
        intro_member(3, LaurentPoly.monomial(2, {2: 4}), Scalar(0), 5)  # too high
    with pytest.raises(ValueError):
        intro_member(3, LaurentPoly.monomial(2, {1: 2}), Scalar(0), 5)  # uses x1


def test_intro_family_closed_under_composition():
    a = intro_member(3, LaurentPoly.monomial(2, {2: 2}), Scalar(1), 6)
    b = intro_member(3, LaurentPoly.monomial(2, {2: 3}), Scalar(-2), 6)
    c = a.compose(b)
    # second component stays Moebius with parameter t1 + t2
    assert c.components[1] == moebius_component(2, 2, Scalar(1), Scalar(-1), 6)


def test_chain_summands():
    assert chain_summands(2, 4) == []
    assert chain_summands(2, 3) == [("U", 1)]
    assert chain_summands(2, 0) == [("U", 1), ("V", 1), ("U", 2), ("V", 2)]
    with pytest.raises(ValueError):
        chain_summands(2, 5)


def test_chain_algebra_one_variable():
    g = build_chain_algebra(1, 0, 6)
    x = LaurentPoly.variable(1, 1)
    assert g.dimension == 2
    assert g.contains_field(VectorField([x ** 2]))
    assert g.contains_field(VectorField([x]))


def test_chain_algebra_top_is_zero():
    assert build_chain_algebra(2, 4, 8).is_zero()


def test_chain_algebra_index_three_is_first_summand_only():
    g = build_chain_algebra(2, 3, 6)
    assert all(c.is_zero() for X in g.basis for c in X.coeffs[1:])


def test_chain_exponents():
    assert [chain_exponent(j) for j in (2, 3, 4, 5)] == [3, 8, 18, 38]
    with pytest.raises(ValueError):
        chain_exponent(1)


def test_triangular_generator_identity():
    spec = TriangularGeneratorSpec(
        (LaurentPoly.zero(2),), (LaurentPoly.one(2),), Scalar(1), Scalar(0)
    )
    assert build_triangular_generator(spec, 2, 5) == FormalDiffeo.identity(2, 5)


def test_triangular_generator_scaling_one_variable():
    spec = TriangularGeneratorSpec((), (), Scalar(2), Scalar(0))
    phi = build_triangular_generator(spec, 1, 4)
    assert phi == FormalDiffeo([LaurentPoly.variable(1, 1) * 2], 4)


def test_triangular_generator_expansion_example():
    x1, x2 = LaurentPoly.variable(2, 1), LaurentPoly.variable(2, 2)
    spec = TriangularGeneratorSpec(
        (x2 ** 2,), (LaurentPoly.one(2) + x2,), Scalar(1), Scalar(1)
    )
    phi = build_triangular_generator(spec, 2, 5)
    first = x2 ** 2 + x1 + x1 * x2
    second = x2 - x2 ** 2 + x2 ** 3 - x2 ** 4 + x2 ** 5
    assert phi == FormalDiffeo([first, second], 5)


def test_triangular_generator_shape_validation():
    x1 = LaurentPoly.variable(2, 1)
    spec = TriangularGeneratorSpec(
        (x1 ** 2,), (LaurentPoly.one(2),), Scalar(1), Scalar(0)
    )
    with pytest.raises(ValueError):
        build_triangular_generator(spec, 2, 5)  # a depends on an earlier variable
    with pytest.raises(ValueError):
        build_triangular_generator(
            TriangularGeneratorSpec(
                (LaurentPoly.variable(2, 2),), (LaurentPoly.one(2),), Scalar(1), Scalar(0)
            ),
            2,
            5,
        )  # a not in m^2
    with pytest.raises(ValueError):
        build_triangular_generator(
            TriangularGeneratorSpec(
                (LaurentPoly.zero(2),), (LaurentPoly.one(2),), Scalar(0), Scalar(0)
            ),
            2,
            5,
        )  # lambda must be nonzero


def test_seed_functions():
    u1, u2 = nilpotent_seed_functions(3)
    assert u2 == LaurentPoly.monomial(3, {3: -1})
    assert u1 == LaurentPoly.monomial(3, {2: -2, 3: -2})
    v = nilpotent_seed_functions(4)
    assert v[0] == LaurentPoly.monomial(4, {2: -2, 3: -4, 4: -4})


def test_nilpotent_example_shapes():
    for n in (2, 3, 4, 5):
        us, xs, zs = build_nilpotent_example(n)
        assert len(us) == n - 1 and len(xs) == n and len(zs) == n
        # Z1 = x2^2 d1 in every dimension
        assert zs[0] == VectorField.from_terms(n, (LaurentPoly.monomial(n, {2: 2}), 1))
        for Z in zs:
            assert Z.is_formal() and Z.is_nilpotent()
        # u_k * X_k = Z_k for k < n
        for k in range(1, n):
            scaled = VectorField([us[k - 1] * c for c in xs[k - 1].coeffs])
            assert scaled == zs[k - 1]


def test_nilpotent_example_last_field_large_n():
    _, _, zs = build_nilpotent_example(5)
    assert zs[4] == VectorField.from_terms(
        5,
        (LaurentPoly.monomial(5, {4: 1, 5: 1}, -1), 4),
        (LaurentPoly.monomial(5, {5: 2}), 5),
    )


def test_nilpotent_example_commutes():
    for n in (2, 3, 4, 5):
        _, xs, _ = build_nilpotent_example(n)
        for i in range(n):
            for j in range(i + 1, n):
                assert xs[i].bracket(xs[j]).is_zero()


def test_minimum_dimension():
    with pytest.raises(ValueError):
        build_nilpotent_example(1)


def test_expected_values():
    assert [expected_nilpotency_class(n) for n in (2, 3, 4)] == [2, 5, 11]
    assert [expected_a_value(4, k) for k in (1, 2, 3)] == [1, 4, 10]


def test_chain_composition_nonzero_constants():
    for n in (3, 4):
        for k in range(1, n):
            value = chain_composition_value(n, k)
            assert value.is_constant() and not value.is_zero()
