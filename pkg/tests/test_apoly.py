import numpy as np
import pytest
import sympy as sp

from doubletwist.apoly import (
    a_polynomial,
    alpha_beta,
    assemble,
    denominator,
    elimination_numerator,
    numerator,
    oracle_eliminate,
    p_poly,
    q_poly,
    q_poly_weighted,
    verify_on_variety,
    x_numerator,
)
from doubletwist.errors import BadIndex
from doubletwist.polyring import MPolyZ, from_text, mp_primitive, normalize_unit

s, w, z, x = sp.symbols("s w z x")


def to_sympy(p: MPolyZ, names=(s, w)):
    a, b = names
    return sum((c * a**i * b**j for (i, j), c in p.items()), sp.Integer(0))


def _sym_cheb(j, v):
    a, b = sp.Integer(1), sp.Integer(0)
    for _ in range(j):
        a, b = sp.expand(v * a - b), a
    return a


def test_alpha_beta_coefficients():
    alpha, beta = (to_sympy(p) for p in alpha_beta())
    pa = sp.Poly(alpha, w)
    assert sp.expand(pa.coeff_monomial(w**4) - (s**8 + s**4)) == 0
    assert sp.expand(pa.coeff_monomial(1) - (s**4 + 1)) == 0
    assert sp.expand(beta.subs(w, 0) + 2 * (s**2 - 1) ** 2) == 0


def test_alpha_beta_come_from_the_substitution():
    # alpha = D^2 (z^2 - 2) and beta = D^2 (8 - z (z + x)) with z = N / D
    alpha, beta = (to_sympy(p) for p in alpha_beta())
    D, N = to_sympy(denominator()), to_sympy(numerator())
    zz, xx = N / D, s + 1 / s
    assert sp.simplify(alpha - D**2 * (zz**2 - 2)) == 0
    assert sp.simplify(beta - D**2 * (8 - zz * (zz + xx))) == 0
    assert sp.simplify(to_sympy(x_numerator()) / D - xx) == 0


def test_z_of_r():
    r = (s**2 * w + 1) / (s * (w + 1))
    assert sp.simplify(2 * (r + 1 / r) - (s + 1 / s) - to_sympy(numerator()) / to_sympy(denominator())) == 0


def test_q_sequence_base_cases():
    alpha, beta = alpha_beta()
    seq = q_poly(3)
    assert seq[-1] == 2 and seq[0] == 2
    assert seq[1] == 2 * alpha - 2 + beta
    assert seq[2] == alpha * seq[1] - 2 + beta
    for j in range(1, 4):
        assert seq[j] == alpha * seq[j - 1] - seq[j - 2] + beta


def test_q2_expansion_against_sympy():
    a_s, b_s = (to_sympy(p) for p in alpha_beta())
    q1 = sp.expand(2 * a_s - 2 + b_s)
    q2 = sp.expand(a_s * q1 - 2 + b_s)
    assert sp.expand(to_sympy(q_poly(2)[2]) - q2) == 0


@pytest.mark.parametrize("m", [0, 1, 2, 3, 4])
def test_p_poly_recurrence_matches_definition(m):
    direct = sp.expand(2 + (z - x) * _sym_cheb(m, z) * _sym_cheb(m - 1, z)) if m else sp.Integer(2)
    assert sp.expand(to_sympy(p_poly(m), (x, z)) - direct) == 0


def test_p_poly_small():
    assert p_poly(-1) == 2 and p_poly(0) == 2
    xx, zz = MPolyZ.gens(("x", "z"))
    assert p_poly(1) == 2 + (zz - xx) * zz


@pytest.mark.parametrize("m", [1, 2, 3])
def test_weighted_sequence_is_cleared_p(m):
    # D^(2m) P_m(x, z(s, w)) computed by sympy
    D, N = to_sympy(denominator()), to_sympy(numerator())
    expr = sp.cancel(D ** (2 * m) * to_sympy(p_poly(m), (x, z)).subs({x: s + 1 / s, z: N / D}))
    assert sp.expand(expr - to_sympy(q_poly_weighted(m).last)) == 0


@pytest.mark.parametrize("m", [1, 2, 3])
def test_resultant_route_agrees_with_weighted_recurrence(m):
    e = elimination_numerator(m)
    q = q_poly_weighted(m).last
    assert e == q or e == -q


def test_weight_identity_at_random_points():
    rng = np.random.default_rng(7)
    for m in (1, 2):
        q = q_poly_weighted(m).last
        for _ in range(100):
            s1 = complex(*rng.normal(size=2))
            w1 = complex(*rng.normal(size=2))
            x1 = s1 + 1 / s1
            r = (s1**2 * w1 + 1) / (s1 * (w1 + 1))
            z1 = 2 * (r + 1 / r) - x1
            D = s1 * (w1 + 1) * (s1**2 * w1 + 1)
            ref = D ** (2 * m) * p_poly(m)(x1, z1)
            assert abs(q(s1, w1) - ref) <= 1e-8 * max(1.0, q.abs_eval(s1, w1))


M_SYM, L_SYM = sp.symbols("M L")
A1_TEXT = (
    "M^14*L^5 - 2*M^14*L^4 + M^14*L^3 + 3*M^12*L^4 - 2*M^12*L^3 - M^12*L^2 + 3*M^10*L^4 "
    "- 10*M^10*L^3 + 7*M^10*L^2 - M^8*L^4 + 19*M^8*L^3 - 19*M^8*L^2 + M^8*L - 7*M^6*L^3 "
    "+ 10*M^6*L^2 - 3*M^6*L + M^4*L^3 + 2*M^4*L^2 - 3*M^4*L - M^2*L^2 + 2*M^2*L - M^2"
)


def test_m1_coefficients_pinned():
    A = a_polynomial(1).a_first
    assert A == from_text(A1_TEXT)
    assert normalize_unit(A) == oracle_eliminate(1)
    # the non-trivial factor splits further; only one piece is met by characters
    fac = sp.factor_list(to_sympy(A, (M_SYM, L_SYM)))[1]
    assert len(fac) == 4


@pytest.mark.parametrize("m", [1, 2, 3])
def test_tuple_and_normalisation(m):
    tup = a_polynomial(m)
    A = tup.a_first
    assert tup.a_first == tup.a_second
    assert mp_primitive(A) == A
    assert A.content() == 1
    # (L - 1) divides A
    assert A(2, 1) == 0 and A(-3, 1) == 0
    L = MPolyZ.monomial(0, 1, 1, ("M", "L"))
    A.divexact(L - 1)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_matches_elimination_oracle(m):
    assert normalize_unit(a_polynomial(m).a_first) == oracle_eliminate(m)


@pytest.mark.parametrize("m", [1, 2])
def test_unweighted_construction_does_not_match(m):
    # the unweighted recurrence is not the elimination result and does not vanish on characters
    literal = a_polynomial(m, "unweighted").a_first
    assert normalize_unit(literal) != oracle_eliminate(m)
    assert verify_on_variety(m, 20, construction="unweighted").max_scaled > 1e-3


@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("mirrored", [False, True])
def test_vanishes_on_sampled_characters(m, mirrored):
    rep = verify_on_variety(m, 60, seed=3, mirrored=mirrored)
    assert rep.passed
    assert rep.branch_counts["P"] > 0 and rep.branch_counts["z=x"] > 0
    # on the P branch the other component's longitude eigenvalue is -1
    assert rep.max_longitude_residual < 1e-8


def test_verify_is_deterministic_across_jobs():
    a = verify_on_variety(2, 30, seed=5, jobs=1)
    b = verify_on_variety(2, 30, seed=5, jobs=4)
    assert a == b


def test_assemble_primitive():
    sw = MPolyZ.gens(("s", "w"))
    A = assemble(6 * sw[0] * sw[1] + 4, 1)
    assert A.content() == 1


def test_unsupported_indices():
    for bad in (0, -2):
        with pytest.raises(BadIndex):
            a_polynomial(bad)
    with pytest.raises(BadIndex):
        oracle_eliminate(5)
    with pytest.raises(ValueError):
        a_polynomial(1, "other")
