"""A-polynomial of the canonical component of J(2m+1, 2m+1).

Coordinates: s is the meridian eigenvalue of the first component and w the
(1,1) entry of rho(w) for the word commuting with a.  On the branch that is
not z = x the character satisfies P_m(x, z) = 0 with

    P_m(x, z) = 2 + (z - x) S_m(z) S_{m-1}(z),
    z = 2 (r + 1/r) - x,   r = (s^2 w + 1) / (s (w + 1)),

so z = N / D with D = s (w + 1)(s^2 w + 1).  Clearing denominators gives
Q_m(s, w) = D^(2m) P_m(x, z(s, w)), and the A-polynomial is

    A(M, L) = (L - 1) Q_m(M, L M^(2m)),

the (L - 1) factor coming from the z = x branch where w = s^(2m).

Two constructions of Q_m are available.  "weighted" runs the recurrence for
D^(2m) P_m directly.  "unweighted" runs Q_m = alpha Q_{m-1} - Q_{m-2} + beta from
Q_{-1} = Q_0 = 2; alpha and beta equal D^2 (z^2 - 2) and D^2 (8 - z(z + x)),
but the unweighted seeds and subtraction make the result differ from
D^(2m) P_m, and it does not vanish on the character variety.  The weighted
form is the default; the literal one is kept for comparison.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .chebyshev import cheb_pair, cheb_upoly
from .charvariety import DTLParams, RepPoint, literal_words
from .errors import BadIndex, DoubleTwistError
from .polyring import (
    CPoly,
    MPolyZ,
    mp_primitive,
    mp_substitute_monomial,
    normalize_unit,
    resultant_z,
)
from .rootfinder import all_roots

CONSTRUCTIONS = ("weighted", "unweighted")
BRANCH_TOL = 1e-8

_s, _w = MPolyZ.gens(("s", "w"))


def _check_m(m: int) -> None:
    if m < 1:
        raise BadIndex(f"A-polynomial needs m >= 1, got {m}")


def alpha_beta() -> tuple[MPolyZ, MPolyZ]:
    """The polynomials alpha and beta of the Q_m recurrence, in (s, w)."""
    s, w = _s, _w
    alpha = (
        (s**8 + s**4) * w**4
        + (-2 * s**8 + 6 * s**6 + 6 * s**4 - 2 * s**2) * w**3
        + (s**8 - 12 * s**6 + 34 * s**4 - 12 * s**2 + 1) * w**2
        + (-2 * s**6 + 6 * s**4 + 6 * s**2 - 2) * w
        + s**4
        + 1
    )
    beta = -2 * (s**2 - 1) ** 2 * (
        s**4 * w**4 - (s**4 + s**2) * w**3 - 6 * s**2 * w**2 - (s**2 + 1) * w + 1
    )
    return alpha, beta


def denominator() -> MPolyZ:
    """D = s (w + 1)(s^2 w + 1), the denominator of z(s, w)."""
    return _s * (_w + 1) * (_s**2 * _w + 1)


def numerator() -> MPolyZ:
    """N with z(s, w) = N / D."""
    s, w = _s, _w
    return s**4 * w**2 - s**4 * w + s**2 * w**2 + 6 * s**2 * w + s**2 - w + 1


def x_numerator() -> MPolyZ:
    """x * D = (s^2 + 1)(w + 1)(s^2 w + 1)."""
    return (_s**2 + 1) * (_w + 1) * (_s**2 * _w + 1)


@dataclass(frozen=True)
class QSequence:
    """Q_j for j = -1 .. m; entries[0] is Q_{-1}."""

    m: int
    entries: tuple[MPolyZ, ...]
    construction: str = "unweighted"

    def __getitem__(self, j: int) -> MPolyZ:
        if not -1 <= j <= self.m:
            raise IndexError(j)
        return self.entries[j + 1]

    @property
    def last(self) -> MPolyZ:
        return self.entries[-1]


@lru_cache(maxsize=None)
def q_poly(m: int) -> QSequence:
    """Q_j = alpha Q_{j-1} - Q_{j-2} + beta from Q_{-1} = Q_0 = 2."""
    _check_m(m)
    alpha, beta = alpha_beta()
    two = MPolyZ.const(2, ("s", "w"))
    seq = [two, two]
    for _ in range(m):
        seq.append(alpha * seq[-1] - seq[-2] + beta)
    return QSequence(m, tuple(seq), "unweighted")


@lru_cache(maxsize=None)
def q_poly_weighted(m: int) -> QSequence:
    """D^(2j) P_j(x, z(s, w)) for j = 0 .. m; entry j = -1 is left at 2 (it is not a polynomial)."""
    _check_m(m)
    alpha, beta = alpha_beta()
    D2 = denominator() ** 2
    D4 = D2 * D2
    two = MPolyZ.const(2, ("s", "w"))
    seq = [two, two, 2 * alpha - 2 * D2 + beta]
    weight = D2  # D^(2j - 2) for the next j
    for _ in range(2, m + 1):
        seq.append(alpha * seq[-1] - D4 * seq[-2] + weight * beta)
        weight = weight * D2
    return QSequence(m, tuple(seq[: m + 2]), "weighted")


@dataclass(frozen=True)
class ApolyTuple:
    m: int
    a_first: MPolyZ
    a_second: MPolyZ
    construction: str = "weighted"


def assemble(q: MPolyZ, m: int) -> MPolyZ:
    """(L - 1) Q(M, L M^(2m)), primitive with positive leading coefficient."""
    sub = mp_substitute_monomial(q, 2 * m, ("M", "L"))
    L = MPolyZ.monomial(0, 1, 1, ("M", "L"))
    return mp_primitive((L - 1) * sub)


@lru_cache(maxsize=None)
def a_polynomial(m: int, construction: str = "weighted") -> ApolyTuple:
    """The A-polynomial 2-tuple of the canonical component; both entries coincide by symmetry."""
    _check_m(m)
    if construction == "weighted":
        q = q_poly_weighted(m).last
    elif construction == "unweighted":
        q = q_poly(m).last
    else:
        raise ValueError(f"construction must be one of {CONSTRUCTIONS}")
    A = assemble(q, m)
    return ApolyTuple(m, A, A, construction)


@lru_cache(maxsize=None)
def p_poly(m: int) -> MPolyZ:
    """P_m(x, z) by P_m = (z^2 - 2) P_{m-1} - P_{m-2} + 8 - z(z + x), P_{-1} = P_0 = 2."""
    if m < -1:
        raise BadIndex("p_poly needs m >= -1")
    x, z = MPolyZ.gens(("x", "z"))
    two = MPolyZ.const(2, ("x", "z"))
    prev, cur = two, two
    if m == -1:
        return prev
    for _ in range(m):
        prev, cur = cur, (z * z - 2) * cur - prev + 8 - z * (z + x)
    return cur



@lru_cache(maxsize=None)
def elimination_numerator(m: int) -> MPolyZ:
    """Res_z(D z - N, s P_m(x, z)) / s, which equals D^(2m) P_m(x, z(s, w)) up to sign.

    s P_m is polynomial in (s, z) because s x = s^2 + 1.
    """
    _check_m(m)
    Sm, Sm1 = cheb_upoly(m), cheb_upoly(m - 1)
    prod = Sm * Sm1
    sx = _s**2 + 1
    deg = len(prod.coefficients)
    coeffs = [MPolyZ({}, ("s", "w")) for _ in range(deg + 1)]
    coeffs[0] = coeffs[0] + 2 * _s
    for k, c in enumerate(prod.coefficients):
        if c:
            # (z - x) * c z^k, scaled by s
            coeffs[k + 1] = coeffs[k + 1] + c * _s
            coeffs[k] = coeffs[k] - c * sx
    linear = [-numerator(), denominator()]
    res = resultant_z(linear, coeffs)
    return res.divexact(MPolyZ.monomial(1, 0, 1, ("s", "w")))


@lru_cache(maxsize=None)
def oracle_eliminate(m: int) -> MPolyZ:
    """A-polynomial by elimination, normalized modulo +-monomials; includes the z = x factor."""
    _check_m(m)
    if m > 4:
        raise BadIndex("elimination oracle limited to 1 <= m <= 4")
    branch_zx = _w - _s ** (2 * m)  # w = s^(2m) on z = x
    full = mp_substitute_monomial(branch_zx * elimination_numerator(m), 2 * m, ("M", "L"))
    return normalize_unit(full)


# --- numeric sampling on the variety ----------------------------------------

@dataclass
class VarietyReport:
    m: int
    count: int
    construction: str
    mirrored: bool
    max_scaled: float
    branch_counts: dict[str, int]
    max_longitude_residual: float
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.max_scaled < 1e-6 and not self.failures and self.branch_counts.get("P", 0) > 0


def _scaled_abs(A: MPolyZ, M: complex, L: complex) -> float:
    num = 0j
    den = 0.0
    for (a, b), c in A.items():
        t = c * M**a * L**b
        num += t
        den += abs(t)
    return abs(num) / max(den, 1e-300)


def _canonical_cpoly(m: int, x: complex, y: complex) -> CPoly:
    """t(z) - z for fixed traces x, y."""
    Sm = CPoly(tuple(complex(c) for c in cheb_upoly(m).coefficients))
    Sm1 = CPoly(tuple(complex(c) for c in cheb_upoly(m - 1).coefficients))
    t = CPoly((x * y, -1 + 0j)) * (Sm * Sm + Sm1 * Sm1) - (Sm * Sm1).scale(x * x + y * y - 4)
    return t - CPoly((0j, 1 + 0j))


def _draw(rng: np.random.Generator, i: int) -> complex:
    theta = rng.uniform(0.1, 2 * math.pi - 0.1)
    radius = 1.0 if i % 2 == 0 else float(np.exp(rng.uniform(-0.7, 0.7)))
    return radius * complex(math.cos(theta), math.sin(theta))


def _sample(m: int, A: MPolyZ, free: complex, sign: int, mirrored: bool):
    s1, s2 = (sign, free) if mirrored else (free, sign)
    x, y = s1 + 1 / s1, s2 + 1 / s2
    M = s2 if mirrored else s1
    trace = y if mirrored else x
    out = []
    for z in all_roots(_canonical_cpoly(m, x, y)).roots:
        S = cheb_pair(m, z)
        if abs(2 + (z - trace) * S.s_j * S.s_jm1) < BRANCH_TOL:
            branch = "P"
        elif abs(z - trace) < BRANCH_TOL * max(1.0, abs(z)):
            branch = "z=x"
        else:
            out.append(("other", 0.0, 0.0))
            continue
        words = literal_words(RepPoint.from_z(s1, s2, z), DTLParams(m, m))
        # the peripheral word for b is w-bar; both are triangular in the chosen basis
        ell = words["wbar"][0, 0] if mirrored else words["w"][0, 0]
        L = ell / M ** (2 * m)
        partner = words["w"][0, 0] if mirrored else words["wbar"][0, 0]
        partner_res = abs(partner / (s1 if mirrored else s2) ** (2 * m) + 1) if branch == "P" else 0.0
        out.append((branch, _scaled_abs(A, M, L), partner_res))
    return out


def verify_on_variety(m: int, count: int = 200, seed: int = 0, mirrored: bool = False,
                      construction: str = "weighted", jobs: int = 1) -> VarietyReport:
    """Evaluate A(M, L) at sampled characters of the canonical component.

    One meridian eigenvalue is drawn at random, alternately on and off the
    unit circle; the other is +-1.  All roots of t = z are classified into
    the P_m branch, the z = x branch, or other (the +-1 sign flips the branch
    equation).  With mirrored=True the roles of the two components swap.
    """
    _check_m(m)
    A = a_polynomial(m, construction).a_first
    rng = np.random.default_rng(seed)
    draws = [(_draw(rng, i), 1 if i % 4 < 2 else -1) for i in range(count)]

    def run(item):
        free, sign = item
        try:
            return _sample(m, A, free, sign, mirrored), None
        except DoubleTwistError as exc:
            return [], f"s={free!r}: {exc}"

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, draws))
    else:
        results = [run(d) for d in draws]
    counts = {"P": 0, "z=x": 0, "other": 0}
    worst = 0.0
    partner = 0.0
    failures = []
    for rows, err in results:
        if err:
            failures.append(err)
        for branch, val, pres in rows:
            counts[branch] += 1
            if branch != "other":
                worst = max(worst, val)
                partner = max(partner, pres)
    return VarietyReport(m, count, construction, mirrored, worst, counts, partner, failures)
