import random
from fractions import Fraction

import pytest

from germcalc.matrices import (
    charpoly,
    identity,
    is_nilpotent_matrix,
    is_unipotent_matrix,
    is_zero_matrix,
    jordan_chevalley,
    mat_eq,
    mat_inverse,
    mat_mul,
    matrix_exp_nilpotent,
    matrix_log_unipotent,
    poly_divmod,
    poly_eval_matrix,
    poly_gcd,
    squarefree_part,
)
from germcalc.scalars import Scalar


def S(x):
    return Scalar(x)


def M(rows):
    return [[S(x) for x in row] for row in rows]


def test_inverse():
    a = M([[1, 2], [3, 4]])
    assert mat_eq(mat_mul(a, mat_inverse(a)), identity(2))
    with pytest.raises(ValueError):
        mat_inverse(M([[1, 2], [2, 4]]))


def test_charpoly_companion():
    # char poly of [[0, -c0], [1, -c1]] is t^2 + c1 t + c0
    a = M([[0, -5], [1, -3]])
    assert charpoly(a) == [S(5), S(3), S(1)]


def test_exp_log_inverse_of_each_other():
    n = M([[0, 1, 2], [0, 0, 3], [0, 0, 0]])
    e = matrix_exp_nilpotent(n)
    assert is_unipotent_matrix(e)
    assert mat_eq(matrix_log_unipotent(e), n)


def test_exp_rejects_non_nilpotent():
    with pytest.raises(ValueError):
        matrix_exp_nilpotent(M([[1, 0], [0, 1]]))


def test_poly_gcd_and_squarefree():
    # p = (t-1)^2 (t-2): squarefree part (t-1)(t-2)
    p = [S(-2), S(5), S(-4), S(1)]
    sf = squarefree_part(p)
    assert sf == [S(2), S(-3), S(1)]
    g = poly_gcd(p, sf)
    assert g[-1] == S(1)


def test_poly_divmod():
    p = [S(1), S(0), S(1)]  # 1 + t^2
    q, r = poly_divmod(p, [S(1), S(1)])  # divide by 1 + t
    # 1 + t^2 = (t - 1)(1 + t) + 2
    assert q == [S(-1), S(1)] and r == [S(2)]


def test_jordan_chevalley_distinct_eigenvalues():
    a = M([[1, 1], [0, 2]])
    s, u = jordan_chevalley(a)
    assert mat_eq(s, a) and mat_eq(u, identity(2))


def test_jordan_chevalley_unipotent_input():
    a = M([[1, 7], [0, 1]])
    s, u = jordan_chevalley(a)
    assert mat_eq(s, identity(2)) and mat_eq(u, a)


def test_jordan_chevalley_diagonal():
    a = M([[3, 0], [0, 5]])
    s, u = jordan_chevalley(a)
    assert mat_eq(s, a) and mat_eq(u, identity(2))


def test_jordan_chevalley_nontrivial_block():
    # eigenvalue 2 with a Jordan block: s must be 2I, u the unipotent part
    a = M([[2, 1], [0, 2]])
    s, u = jordan_chevalley(a)
    assert mat_eq(s, M([[2, 0], [0, 2]]))
    assert mat_eq(mat_mul(s, u), a)


def test_jordan_chevalley_rejects_singular():
    with pytest.raises(ValueError):
        jordan_chevalley(M([[0, 0], [0, 1]]))


def test_jordan_chevalley_gaussian_entries():
    a = [[Scalar(0, 1), Scalar(1)], [Scalar(0), Scalar(0, 1)]]
    s, u = jordan_chevalley(a)
    assert mat_eq(mat_mul(s, u), a)
    assert is_unipotent_matrix(u)


def test_jordan_chevalley_random_properties():
    rng = random.Random(4242)
    done = 0
    while done < 25:
        n = rng.randint(2, 4)
        a = [
            [Scalar(Fraction(rng.randint(-3, 3), rng.choice([1, 2]))) for _ in range(n)]
            for _ in range(n)
        ]
        if not charpoly(a)[0]:
            continue
        s, u = jordan_chevalley(a)
        assert mat_eq(mat_mul(s, u), a)
        assert mat_eq(mat_mul(u, s), a)
        assert is_unipotent_matrix(u)
        f = squarefree_part(charpoly(s))
        assert is_zero_matrix(poly_eval_matrix(f, s))
        s2, u2 = jordan_chevalley(a)
        assert mat_eq(s, s2) and mat_eq(u, u2)
        done += 1
