"""Nonabelian SL(2, C) representations of the double twist link J(2m+1, 2n+1).

The link group is <a, b | a w = w a> with
w = (b^-1 a)^m [(b a^-1)^m b a (b^-1 a)^m]^n = c d^n, where c = (b^-1 a)^m
and d = b c^-1 a c.  Representations are normalised as

    rho(a) = [[s1, 1], [0, 1/s1]],   rho(b) = [[s2, 0], [u, 1/s2]].

Traces: x = tr a, y = tr b, z = tr ab^-1, t = tr d.  For m = n the canonical
component of the character variety is t = z, which for s1 = s2 = s becomes
R_m(s, z) = 0 with

    R_m(s, z) = (q + 2 - z)(S_m^2 + S_{m-1}^2) - 2 q S_m S_{m-1} - z,
    q = s^2 + s^-2.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .chebyshev import cheb_pair, cheb_upoly, UPolyZ
from .errors import BadIndex, DegenerateParameter, NotOnVariety
from .polyring import CPoly, MPolyZ

ON_VARIETY_TOL = 1e-6


@dataclass(frozen=True)
class DTLParams:
    m: int
    n: int

    @classmethod
    def symmetric(cls, m: int) -> "DTLParams":
        check_canonical_index(m)
        return cls(m, m)


def check_canonical_index(m: int) -> None:
    if m in (-1, 0):
        raise BadIndex(f"m={m} does not give a hyperbolic double twist link")


@dataclass(frozen=True)
class RepPoint:
    s1: complex
    s2: complex
    u: complex

    @property
    def x(self) -> complex:
        return self.s1 + 1 / self.s1

    @property
    def y(self) -> complex:
        return self.s2 + 1 / self.s2

    @property
    def z(self) -> complex:
        return self.s1 / self.s2 + self.s2 / self.s1 - self.u

    def t(self, m: int) -> complex:
        return trace_t(self.x, self.y, self.z, m)

    @classmethod
    def from_z(cls, s1: complex, s2: complex, z: complex) -> "RepPoint":
        """The point with the given eigenvalues and trace z = tr ab^-1."""
        return cls(s1, s2, s1 / s2 + s2 / s1 - z)


@dataclass(frozen=True)
class WordMatrices:
    rho_a: np.ndarray
    rho_b: np.ndarray
    rho_c: np.ndarray
    rho_d: np.ndarray
    rho_w: np.ndarray
    w11: complex
    w21: complex
    ow11: complex


def trace_t(x, y, z, m: int):
    """tr rho(d) = (xy - z)(S_m^2 + S_{m-1}^2) - (x^2 + y^2 - 4) S_m S_{m-1}, with S at z."""
    p = cheb_pair(m, z)
    return (x * y - z) * (p.s_j ** 2 + p.s_jm1 ** 2) - (x * x + y * y - 4) * p.s_j * p.s_jm1


def riley_value(params: DTLParams, x, y, z):
    """The Riley polynomial w'_21 = S_m(z) S_{n-1}(t) - S_{m-1}(z) S_n(t)."""
    t = trace_t(x, y, z, params.m)
    pz = cheb_pair(params.m, z)
    pt = cheb_pair(params.n, t)
    return pz.s_j * pt.s_jm1 - pz.s_jm1 * pt.s_j


def _matrix(rows) -> np.ndarray:
    """2x2 array; complex dtype for machine numbers, object dtype otherwise (e.g. mpmath)."""
    flat = [e for r in rows for e in r]
    if all(isinstance(e, (int, float, complex, np.number)) for e in flat):
        return np.array(rows, dtype=complex)
    return np.array(rows, dtype=object)


def _inverse(A: np.ndarray) -> np.ndarray:
    # adjugate; every matrix here is unimodular
    return _matrix([[A[1, 1], -A[0, 1]], [-A[1, 0], A[0, 0]]])


def build_matrices(p: RepPoint, params: DTLParams) -> WordMatrices:
    """Closed Chebyshev forms of rho(c), rho(d) and rho(w) = rho(c) rho(d)^n.

    Generic in the scalar type, so the same formulas run in extended precision.
    """
    s1, s2, u = p.s1, p.s2, p.u
    if s1 == 0 or s2 == 0 or u == 0:
        raise DegenerateParameter("s1, s2 and u must be nonzero")
    m, n = params.m, params.n
    z = p.z
    S = cheb_pair(m, z)
    Sm, Sm1 = S.s_j, S.s_jm1

    rho_a = _matrix([[s1, 1], [0, 1 / s1]])
    rho_b = _matrix([[s2, 0], [u, 1 / s2]])
    rho_c = _matrix(
        [
            [Sm - (s2 / s1 - u) * Sm1, Sm1 / s2],
            [-s1 * u * Sm1, Sm - (s1 / s2) * Sm1],
        ]
    )
    d11 = s1 * s2 * Sm ** 2 - (s1 ** 2 + s2 ** 2) * Sm * Sm1 + (s1 * s2 + u) * Sm1 ** 2
    d12 = s2 * Sm ** 2 - (s1 + 1 / s1) * Sm * Sm1 + Sm1 ** 2 / s2
    d21 = u * (s1 * Sm ** 2 - (s2 + 1 / s2) * Sm * Sm1 + Sm1 ** 2 / s1)
    d22 = (1 / (s1 * s2) + u) * Sm ** 2 - (s1 ** -2 + s2 ** -2) * Sm * Sm1 + Sm1 ** 2 / (s1 * s2)
    rho_d = _matrix([[d11, d12], [d21, d22]])

    t = trace_t(p.x, p.y, z, m)
    T = cheb_pair(n, t)
    Tn, Tn1 = T.s_j, T.s_jm1
    d_pow = _matrix([[Tn - d22 * Tn1, d12 * Tn1], [d21 * Tn1, Tn - d11 * Tn1]])
    rho_w = rho_c @ d_pow

    w21 = u * s1 * (Sm * Tn1 - Sm1 * Tn)
    ow11 = -Tn1 * ((s1 / s2 + 1 / (s1 * s2)) * Sm - s2 ** -2 * Sm1) + Tn * Sm
    return WordMatrices(rho_a, rho_b, rho_c, rho_d, rho_w, rho_w[0, 0], w21, ow11)


def w11_on_riley(p: RepPoint, params: DTLParams) -> complex:
    """(1,1) entry of rho(w) on the Riley variety, in the simplified Chebyshev form."""
    s1, s2 = p.s1, p.s2
    S = cheb_pair(params.m, p.z)
    T = cheb_pair(params.n, p.t(params.m))
    return -T.s_jm1 * ((s2 / s1 + 1 / (s1 * s2)) * S.s_j - s1 ** -2 * S.s_jm1) + T.s_j * S.s_j


def _mpow(A: np.ndarray, k: int) -> np.ndarray:
    if k < 0:
        A = _inverse(A)
        k = -k
    out = _matrix([[A[0, 0] ** 0, 0 * A[0, 0]], [0 * A[0, 0], A[0, 0] ** 0]])
    for _ in range(k):
        out = out @ A
    return out


def literal_words(p: RepPoint, params: DTLParams) -> dict[str, np.ndarray]:
    """rho of the words c, d, w and w-bar by plain matrix multiplication."""
    m, n = params.m, params.n
    a = _matrix([[p.s1, 1], [0, 1 / p.s1]])
    b = _matrix([[p.s2, 0], [p.u, 1 / p.s2]])
    ai, bi = _inverse(a), _inverse(b)
    c = _mpow(bi @ a, m)
    d = _mpow(b @ ai, m) @ b @ a @ c
    w = c @ _mpow(d, n)
    oc = _mpow(ai @ b, m)
    od = _mpow(a @ bi, m) @ a @ b @ oc
    ow = oc @ _mpow(od, n)
    return {"a": a, "b": b, "c": c, "d": d, "w": w, "wbar": ow}


# --- the canonical component ------------------------------------------------

_cache_lock = threading.Lock()
_canonical_cache: dict[int, MPolyZ] = {}


def _upoly_to_mpoly(p: UPolyZ, var: int) -> MPolyZ:
    return MPolyZ({((k, 0) if var == 0 else (0, k)): c for k, c in enumerate(p.coefficients)}, ("q", "z"))


def canonical_poly_qz(m: int) -> MPolyZ:
    """R_m as an exact integer polynomial in (q, z), q = s^2 + s^-2."""
    check_canonical_index(m)
    with _cache_lock:
        hit = _canonical_cache.get(m)
    if hit is not None:
        return hit
    Sm = _upoly_to_mpoly(cheb_upoly(m), 1)
    Sm1 = _upoly_to_mpoly(cheb_upoly(m - 1), 1)
    q, z = MPolyZ.gens(("q", "z"))
    R = (q + 2 - z) * (Sm * Sm + Sm1 * Sm1) - 2 * q * Sm * Sm1 - z
    with _cache_lock:
        _canonical_cache.setdefault(m, R)
        return _canonical_cache[m]


def canonical_poly_from_q(m: int, q: complex) -> CPoly:
    """R_m(s, .) as a polynomial in z, given q = s^2 + s^-2."""
    R = canonical_poly_qz(m)
    deg = R.degree(1)
    coeffs = [0j] * (deg + 1)
    for (a, b), c in R.items():
        coeffs[b] += c * q ** a
    return CPoly(tuple(coeffs))


def canonical_poly(m: int, s: complex) -> CPoly:
    if s == 0:
        raise DegenerateParameter("s must be nonzero")
    s = complex(s)
    return canonical_poly_from_q(m, s * s + 1 / (s * s))


def canonical_residual(m: int, s: complex, z: complex) -> float:
    """|R_m(s, z)| scaled by the size of its terms."""
    p = canonical_poly(m, s)
    return abs(p(z)) / max(p.abs_eval(z), 1.0)


def w11_canonical(m: int, s: complex, z: complex, tol: float = ON_VARIETY_TOL) -> complex:
    """w11 = (S_m - S_{m-1})(S_m - s^-2 S_{m-1}) on the canonical component with s1 = s2 = s."""
    res = canonical_residual(m, s, z)
    if res > tol:
        raise NotOnVariety(f"R_m(s, z) residual {res:.3g} exceeds {tol:g}")
    S = cheb_pair(m, z)
    return (S.s_j - S.s_jm1) * (S.s_j - S.s_jm1 / (s * s))


def canonical_identity_residuals(m: int, s: complex, z: complex) -> dict[str, float]:
    """Residuals of the algebraic identities valid on the canonical component."""
    S = cheb_pair(m, z)
    a, b = S.s_j, S.s_jm1
    s2, si2 = s * s, 1 / (s * s)
    q = s2 + si2
    w11 = (a - b) * (a - si2 * b)
    ratio = (a - si2 * b) / (a - s2 * b)
    product = (a - b) ** 2 * (a - s2 * b) * (a - si2 * b)
    pole = (z - 2) * (q - z)
    prod_closed = (2 * z - (q + 2)) / pole
    sumsq_closed = (z * z - 2 * q) / pole
    return {
        "w11_squared_ratio": abs(w11 ** 2 - ratio) / max(1.0, abs(ratio)),
        "product_is_one": abs(product - 1),
        "prod_closed_form": abs(a * b - prod_closed) / max(1.0, abs(prod_closed)),
        "sumsq_closed_form": abs(a * a + b * b - sumsq_closed) / max(1.0, abs(sumsq_closed)),
    }


def riley_cpoly(params: DTLParams, s1: complex, s2: complex) -> CPoly:
    """w'_21 as a polynomial in z for fixed eigenvalues s1, s2."""
    x, y = s1 + 1 / s1, s2 + 1 / s2
    zpoly = CPoly((0j, 1 + 0j))

    def cheb_c(j: int, v: CPoly) -> tuple[CPoly, CPoly]:
        a, b = CPoly((1 + 0j,)), CPoly(())
        if j >= 0:
            for _ in range(j):
                a, b = v * a - b, a
        else:
            for _ in range(-j):
                a, b = b, v * b - a
        return a, b

    Sm, Sm1 = cheb_c(params.m, zpoly)
    xy_minus_z = CPoly((x * y, -1 + 0j))
    t = xy_minus_z * (Sm * Sm + Sm1 * Sm1) - (Sm * Sm1).scale(x * x + y * y - 4)
    Tn, Tn1 = cheb_c(params.n, t)
    return Sm * Tn1 - Sm1 * Tn


def riley_roots(params: DTLParams, s1: complex, s2: complex, steps: int = 8) -> list[complex]:
    """Roots of w'_21 in z, polished against the unexpanded Chebyshev form.

    The expanded polynomial has tight root clusters whose forward error is far
    above its backward error; Newton on riley_value, which is evaluated by the
    recurrence, recovers most of the lost digits.
    """
    from .rootfinder import all_roots

    p = riley_cpoly(params, s1, s2)
    dp = p.derivative()
    x, y = s1 + 1 / s1, s2 + 1 / s2
    out = []
    for z in all_roots(p).roots:
        f = riley_value(params, x, y, z)
        for _ in range(steps):
            d = dp(z)
            if d == 0:
                break
            z_new = z - f / d
            f_new = riley_value(params, x, y, z_new)
            if not abs(f_new) < abs(f):
                break
            z, f = z_new, f_new
        out.append(complex(z))
    return out
