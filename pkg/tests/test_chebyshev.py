from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from doubletwist.chebyshev import (
    ChebPair,
    UPolyZ,
    cheb,
    cheb_array,
    cheb_pair,
    cheb_upoly,
    quadratic_identity_residual,
    product_recurrence_residual,
    sl2_power,
)
from doubletwist.errors import NotUnimodular

v_sym = sp.Symbol("v")


def test_small_values():
    assert cheb(0, 5) == 1
    assert cheb(1, 5) == 5
    assert cheb(2, 5) == 24
    assert cheb(-1, 5) == 0
    assert cheb(-2, 5) == -1


def test_against_sympy_chebyshev_u():
    # S_j(v) = U_j(v / 2)
    for j in range(0, 13):
        ours = sp.Poly(list(reversed(cheb_upoly(j).coefficients)), v_sym)
        ref = sp.Poly(sp.expand(sp.chebyshevu(j, v_sym / 2)), v_sym)
        assert ours == ref


@given(st.integers(-15, 15), st.fractions(min_value=-5, max_value=5, max_denominator=20))
def test_negative_index_reflection(j, v):
    assert cheb(-j - 2, v) == -cheb(j, v)


@given(st.integers(-12, 12), st.fractions(min_value=-4, max_value=4, max_denominator=30))
def test_identities_exact_over_rationals(j, v):
    assert quadratic_identity_residual(j, v) == 0
    assert product_recurrence_residual(j, v) == 0


def test_quadratic_identity_symbolic():
    for j in range(-6, 8):
        S = [sp.expand(cheb_pair(k, v_sym).s_j) for k in (j, j - 1)]
        assert sp.expand(S[0] ** 2 + S[1] ** 2 - v_sym * S[0] * S[1] - 1) == 0


def test_pair_navigation():
    p = cheb_pair(4, Fraction(3, 2))
    assert p.next() == cheb_pair(5, Fraction(3, 2))
    assert p.previous() == cheb_pair(3, Fraction(3, 2))
    assert isinstance(p, ChebPair)


def test_upoly_matches_pair_evaluation():
    for j in range(-8, 9):
        for v in (Fraction(1, 3), 2, -3):
            assert cheb_upoly(j)(v) == cheb(j, v)


def test_upoly_arithmetic():
    a, b = UPolyZ((1, 2)), UPolyZ((0, 0, 3))
    assert (a * b).coefficients == (0, 0, 3, 6)
    assert (a - a).coefficients == ()
    assert a.shift().coefficients == (0, 1, 2)


def test_cheb_array_matches_scalar():
    v = np.array([0.3 + 1j, -2.5, 4j])
    sj, sjm1 = cheb_array(7, v)
    for k, x in enumerate(v):
        p = cheb_pair(7, complex(x))
        assert sj[k] == pytest.approx(p.s_j, rel=1e-13)
        assert sjm1[k] == pytest.approx(p.s_jm1, rel=1e-13)


def _random_sl2(rng):
    A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return A / np.sqrt(np.linalg.det(A))


def test_matrix_power_formula():
    rng = np.random.default_rng(3)
    for _ in range(20):
        V = _random_sl2(rng)
        for j in range(-6, 7):
            ref = np.linalg.matrix_power(V if j >= 0 else np.linalg.inv(V), abs(j))
            assert np.allclose(sl2_power(V, j), ref, rtol=1e-11, atol=1e-11)


def test_matrix_power_rejects_non_unimodular():
    with pytest.raises(NotUnimodular):
        sl2_power(np.array([[2.0, 0], [0, 1.0]]), 3)
