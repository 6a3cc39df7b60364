"""Shared seeded generators for random algebraic test data."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from germcalc.diffeos import FormalDiffeo
from germcalc.fields import VectorField
from germcalc.laurent import LaurentPoly
from germcalc.scalars import Scalar

COEFF_POOL = [0, 0, 1, -1, 2, -2, Fraction(1, 2), Fraction(-3, 2)]


def random_scalar(rng, allow_imag=True) -> Scalar:
    re = rng.choice(COEFF_POOL)
    im = rng.choice(COEFF_POOL) if allow_imag and rng.random() < 0.3 else 0
    return Scalar(re, im)


def random_poly(rng, dim, max_terms=4, max_degree=4, min_exp=0) -> LaurentPoly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exps = tuple(rng.randint(min_exp, max_degree) for _ in range(dim))
        s = random_scalar(rng)
        if s:
            terms[exps] = s
    return LaurentPoly(dim, terms)


def random_series_in_m(rng, dim, max_terms=4, max_degree=4) -> LaurentPoly:
    """A random element of the maximal ideal (degree >= 1 terms only)."""
    p = random_poly(rng, dim, max_terms, max_degree)
    return LaurentPoly(dim, {e: c for e, c in p.terms.items() if sum(e) >= 1})


def random_field(rng, dim, max_degree=4, formal=True) -> VectorField:
    coeffs = []
    for _ in range(dim):
        if formal:
            coeffs.append(random_series_in_m(rng, dim, 3, max_degree))
        else:
            coeffs.append(random_poly(rng, dim, 3, max_degree, min_exp=-2))
    return VectorField(coeffs)


def random_nilpotent_field(rng, dim, max_degree) -> VectorField:
    """Strictly triangular linear part plus random higher-order terms."""
    coeffs = []
    for i in range(dim):
        terms = {}
        for j in range(i + 1, dim):
            c = rng.choice(COEFF_POOL)
            if c:
                e = [0] * dim
                e[j] = 1
                terms[tuple(e)] = Scalar(c)
        for _ in range(3):
            d = rng.randint(2, max(2, max_degree))
            e = [0] * dim
            for _ in range(d):
                e[rng.randrange(dim)] += 1
            s = random_scalar(rng)
            if s:
                terms[tuple(e)] = terms.get(tuple(e), Scalar(0)) + s
        coeffs.append(LaurentPoly(dim, {e: c for e, c in terms.items() if c}))
    return VectorField(coeffs)


def random_unipotent_diffeo(rng, dim, order) -> FormalDiffeo:
    comps = []
    for i in range(dim):
        e_lin = tuple(1 if j == i else 0 for j in range(dim))
        terms = {e_lin: Scalar(1)}
        for j in range(i + 1, dim):
            c = rng.choice(COEFF_POOL)
            if c:
                e = tuple(1 if t == j else 0 for t in range(dim))
                terms[e] = Scalar(c)
        for _ in range(3):
            d = rng.randint(2, order)
            e = [0] * dim
            for _ in range(d):
                e[rng.randrange(dim)] += 1
            s = random_scalar(rng)
            if s:
                terms[tuple(e)] = terms.get(tuple(e), Scalar(0)) + s
        comps.append(LaurentPoly(dim, {e: c for e, c in terms.items() if c}))
    return FormalDiffeo(comps, order)


@pytest.fixture
def rng():
    return random.Random(20240817)
