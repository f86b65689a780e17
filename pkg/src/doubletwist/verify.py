"""Self-checks of every identity the package relies on, grouped into suites.

Each suite takes the link index m, a seed and a sample size and returns a
SuiteResult.  run_suites() builds the pass/fail matrix printed by
``doubletwist verify``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from . import apoly
from .charvariety import (
    DTLParams,
    RepPoint,
    build_matrices,
    canonical_identity_residuals,
    canonical_poly,
    literal_words,
    riley_value,
    riley_roots,
)
from .chebyshev import cheb_pair, quadratic_identity_residual, product_recurrence_residual, sl2_power
from .polyring import normalize_unit
from .rootfinder import all_roots
from .volume import select_branch, volume


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    m: int
    passed: bool
    worst: float
    threshold: float
    detail: str = ""


def _random_complex(rng, n, radius=3.0):
    r = radius * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))


def random_eigenvalue(rng) -> complex:
    """Uniform angle, log-uniform modulus in [1/2, 2]."""
    r = math.exp(rng.uniform(-math.log(2), math.log(2)))
    return complex(r * np.exp(2j * np.pi * rng.uniform()))


def _random_sl2(rng):
    A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return A / np.sqrt(np.linalg.det(A))


def chebyshev_relative_residuals(j: int, v: complex) -> tuple[float, float]:
    """Residuals of the quadratic identity and the product recurrence, divided by the size of the largest term."""
    p = cheb_pair(j, v)
    p1 = p.previous()
    p2 = p1.previous()
    scale1 = max(1.0, abs(p.s_j) ** 2, abs(p.s_jm1) ** 2, abs(v * p.s_j * p.s_jm1))
    scale3 = max(1.0, abs(p.s_j * p.s_jm1), abs((v * v - 2) * p1.s_j * p1.s_jm1),
                 abs(p2.s_j * p2.s_jm1), abs(v))
    return abs(quadratic_identity_residual(j, v)) / scale1, abs(product_recurrence_residual(j, v)) / scale3


def suite_chebyshev(m: int, seed: int = 0, size: int = 200) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for v in _random_complex(rng, size):
        for j in range(-12, 13):
            worst = max(worst, *chebyshev_relative_residuals(j, complex(v)))
    worst_pow = 0.0
    for _ in range(max(1, size // 10)):
        V = _random_sl2(rng)
        for j in range(-10, 11):
            direct = np.linalg.matrix_power(V, j) if j >= 0 else np.linalg.matrix_power(np.linalg.inv(V), -j)
            diff = np.abs(sl2_power(V, j) - direct).max() / max(1.0, np.abs(direct).max())
            worst_pow = max(worst_pow, diff)
    ok = worst < 1e-9 and worst_pow < 1e-10
    return SuiteResult("chebyshev", m, ok, max(worst, worst_pow), 1e-9,
                       f"identities {worst:.2e}, powers {worst_pow:.2e}")


def riley_samples(m: int, rng, count: int):
    """(s1, s2, z) triples on the Riley variety of J(2m+1, 2m+1)."""
    params = DTLParams(m, m)
    out = []
    while len(out) < count:
        s1, s2 = random_eigenvalue(rng), random_eigenvalue(rng)
        for z in riley_roots(params, s1, s2):
            if abs(s1 / s2 + s2 / s1 - z) > 1e-6:
                out.append((s1, s2, z))
    return out[:count]


EXTRA_DIGITS = 50


def _mp_polish(params: DTLParams, s1, s2, z):
    """Newton on the unexpanded Riley value in mpmath precision."""
    x, y = s1 + 1 / s1, s2 + 1 / s2
    h = mpmath.mpf(10) ** (-EXTRA_DIGITS // 2)
    for _ in range(60):
        f = riley_value(params, x, y, z)
        d = (riley_value(params, x, y, z + h) - riley_value(params, x, y, z - h)) / (2 * h)
        if d == 0:
            break
        step = f / d
        z -= step
        if abs(step) < mpmath.mpf(10) ** (-EXTRA_DIGITS + 5) * max(1, abs(z)):
            break
    return z


def representation_residuals(m: int, s1: complex, s2: complex, z: complex) -> tuple[float, float]:
    """(commutator, closed-form vs literal) residuals relative to |rho(w)|, in extended precision.

    At many points rho(w) is a product of matrices whose norms exceed its own
    by 1e9 or more, so double precision cannot resolve either residual; the
    root is re-polished and both products are formed with EXTRA_DIGITS digits.
    """
    params = DTLParams(m, m)
    with mpmath.workdps(EXTRA_DIGITS):
        S1, S2 = mpmath.mpc(s1), mpmath.mpc(s2)
        Z = _mp_polish(params, S1, S2, mpmath.mpc(z))
        p = RepPoint.from_z(S1, S2, Z)
        words = literal_words(p, params)
        a, w = words["a"], words["w"]
        scale = max(1, max(abs(e) for e in w.flat))
        comm = max(abs(e) for e in (a @ w - w @ a).flat) / scale
        closed = max(abs(e) for e in (build_matrices(p, params).rho_w - w).flat) / scale
        return float(comm), float(closed)


def suite_representation(m: int, seed: int = 0, size: int = 50) -> SuiteResult:
    rng = np.random.default_rng(seed)
    comm = closed = 0.0
    for s1, s2, z in riley_samples(m, rng, size):
        c, k = representation_residuals(m, s1, s2, z)
        comm, closed = max(comm, c), max(closed, k)
    ok = comm < 1e-8 and closed < 1e-10
    return SuiteResult("representation", m, ok, max(comm, closed), 1e-8,
                       f"commutator {comm:.2e}, closed form {closed:.2e}")


def canonical_samples(m: int, rng, count: int):
    """(s, z) pairs with R_m(s, z) = 0, away from the poles z = 2 and z = q."""
    out = []
    while len(out) < count:
        s = complex(*rng.normal(size=2))
        q = s * s + 1 / (s * s)
        for z in all_roots(canonical_poly(m, s)).roots:
            if abs(z - 2) > 1e-3 and abs(z - q) > 1e-3:
                out.append((s, z))
    return out[:count]


def suite_canonical(m: int, seed: int = 0, size: int = 100) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst = {}
    for s, z in canonical_samples(m, rng, size):
        for k, v in canonical_identity_residuals(m, s, z).items():
            worst[k] = max(worst.get(k, 0.0), v)
    top = max(worst.values())
    return SuiteResult("canonical", m, top < 1e-8, top, 1e-8,
                       ", ".join(f"{k} {v:.1e}" for k, v in sorted(worst.items())))


def suite_roots(m: int, seed: int = 0, size: int = 50) -> SuiteResult:
    """all_roots against the companion-matrix eigenvalues and the residual of each root."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(size):
        s = complex(*rng.normal(size=2))
        p = canonical_poly(m, s)
        ours = np.array(all_roots(p).roots)
        ref = np.roots(p.array()[::-1])
        for r in ref:
            worst = max(worst, np.abs(ours - r).min() / max(1.0, abs(r)))
    return SuiteResult("roots", m, worst < 1e-8, worst, 1e-8, f"max distance {worst:.2e}")


def suite_volume(m: int, seed: int = 0, size: int = 0) -> SuiteResult:
    alpha = 2 * math.pi / 3
    gk = volume(m, alpha).volume
    simpson = select_branch(m, alpha, method="simpson").chosen.volume
    diff = abs(gk - simpson)
    return SuiteResult("volume", m, diff < 1e-8 and gk > 0, diff, 1e-8,
                       f"Gauss-Kronrod {gk:.12f}, Simpson {simpson:.12f}")


def suite_apoly(m: int, seed: int = 0, size: int = 50) -> SuiteResult:
    if m < 1:
        return SuiteResult("apoly", m, True, 0.0, 0.0, "skipped: m < 1 unsupported")
    tup = apoly.a_polynomial(m)
    ok_oracle = m > 4 or normalize_unit(tup.a_first) == apoly.oracle_eliminate(m)
    rep = apoly.verify_on_variety(m, size, seed)
    seq = apoly.q_poly(m)
    alpha, beta = apoly.alpha_beta()
    rec = all(seq[j] == alpha * seq[j - 1] - seq[j - 2] + beta for j in range(1, m + 1))
    ok = ok_oracle and rep.passed and rec and tup.a_first == tup.a_second
    return SuiteResult("apoly", m, ok, rep.max_scaled, 1e-6,
                       f"oracle {'match' if ok_oracle else 'MISMATCH'}, variety {rep.max_scaled:.1e}, "
                       f"recurrence {'ok' if rec else 'BROKEN'}")


SUITES = {
    "chebyshev": suite_chebyshev,
    "representation": suite_representation,
    "canonical": suite_canonical,
    "roots": suite_roots,
    "volume": suite_volume,
    "apoly": suite_apoly,
}


def run_suites(ms, names=None, seed: int = 0) -> list[SuiteResult]:
    names = list(SUITES) if not names else list(names)
    return [SUITES[n](m, seed) for m in ms for n in names]
