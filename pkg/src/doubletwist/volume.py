"""Volumes of the hyperbolic cone-manifolds E_m(alpha) of J(2m+1, 2m+1).

    Vol E_m(alpha) = int_alpha^pi log|(S_m - e^{-iw} S_{m-1}) / (S_m - e^{iw} S_{m-1})| dw

with S evaluated at a root z(w) of R_m(e^{iw/2}, z), so q = 2 cos w.

The root is followed continuously from just below pi down to 0.  R_m has
real coefficients, so real roots can only leave the real axis as a conjugate
pair at a real double root.  The tracker locates each such point exactly and
continues with both members of the pair; the result is a small acyclic graph
of segments.  The volume is the largest integral over a path through that
graph, counting only samples with |w11| >= 1 (nonnegative integrand).
"""

from __future__ import annotations

import cmath
import math
import threading
from collections import deque
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .chebyshev import cheb_pair
from .charvariety import canonical_poly_from_q, canonical_poly_qz, check_canonical_index
from .errors import BranchJump, DoubleTwistError, NoAdmissibleBranch, SingularPoint, StepUnderflow
from .polyring import CPoly
from .quadrature import adaptive_gk, composite_simpson
from .rootfinder import BranchPath, all_roots, continue_branch

SEED_EPS = 1e-4
STEP = math.pi / 2000
IM_CLAMP = 1e-10
SPLIT_GAP = 1e-5
DEFAULT_TOL = 1e-9
ALPHA_MAX_TOL = 1e-12
MAX_SEGMENTS = 400


def angle_from_fraction(frac: Fraction) -> float:
    """frac * pi, rounded the same way everywhere so that 2pi/k inputs agree bit for bit."""
    return frac.numerator * math.pi / frac.denominator


def family(m: int):
    def poly(omega: float) -> CPoly:
        return canonical_poly_from_q(m, 2.0 * math.cos(omega))
    return poly


def admissible(m: int, z: complex) -> bool:
    """|w11| >= 1 on the canonical component, equivalently Im(S_{m-1} conj S_m) <= 0."""
    S = cheb_pair(m, complex(z))
    return (S.s_jm1 * S.s_j.conjugate()).imag <= 0


def integrand(m: int, omega: float, z: complex) -> float:
    """log|S_m - e^{-iw} S_{m-1}| - log|S_m - e^{iw} S_{m-1}|."""
    S = cheb_pair(m, complex(z))
    e = cmath.exp(1j * omega)
    num = abs(S.s_j - S.s_jm1 / e)
    den = abs(S.s_j - e * S.s_jm1)
    if num == 0 or den == 0:
        raise SingularPoint(f"log singularity at omega={omega!r}, z={z!r}")
    return math.log(num) - math.log(den)


# --- branch graph -----------------------------------------------------------

@dataclass
class Segment:
    """One smooth piece of a root branch, covering [lower, upper] in omega."""

    id: int
    path: BranchPath
    upper: float
    lower: float
    z_upper: complex
    z_lower: complex
    upper_singular: bool = False
    lower_singular: bool = False
    children: list[int] = field(default_factory=list)
    complex_sign: int = 0
    admissible: bool = False


@dataclass
class BranchGraph:
    m: int
    segments: list[Segment]
    seeds: list[int]
    splits: list[tuple[float, complex]]


_graph_lock = threading.Lock()
_graph_cache: dict[int, BranchGraph] = {}


def _real_double_root(m: int, omega: float, z: complex) -> tuple[float, complex]:
    """Solve R = dR/dz = 0 for real (q, z) by Newton, starting near (2 cos omega, Re z)."""
    terms = list(canonical_poly_qz(m).items())

    def system(q, x):
        f = fz = fq = fzz = fzq = 0.0
        for (a, b), c in terms:
            qa = q ** a
            dqa = a * q ** (a - 1) if a else 0.0
            xb = x ** b
            f += c * qa * xb
            fq += c * dqa * xb
            if b:
                xb1 = b * x ** (b - 1)
                fz += c * qa * xb1
                fzq += c * dqa * xb1
                if b > 1:
                    fzz += c * b * (b - 1) * qa * x ** (b - 2)
        return f, fz, fq, fzz, fzq

    q0 = 2.0 * math.cos(omega)
    q, x = q0, float(z.real)
    for _ in range(60):
        f, fz, fq, fzz, fzq = system(q, x)
        try:
            dq, dx = np.linalg.solve(np.array([[fq, fz], [fzq, fzz]]), [-f, -fz])
        except np.linalg.LinAlgError:
            break
        q, x = q + dq, x + dx
        if abs(dq) < 1e-16 and abs(dx) < 1e-15 * max(1.0, abs(x)):
            break
    if not (-2.0 <= q <= 2.0) or abs(q - q0) > 1e-3:
        return omega, complex(z.real)
    return math.acos(q / 2.0), complex(x)


def _track(m: int) -> BranchGraph:
    fam = family(m)

    def flag(o, z):
        return admissible(m, z)

    omega0 = math.pi - SEED_EPS
    segments: dict[int, Segment] = {}
    splits: list[tuple[float, complex, list[int]]] = []
    pending: deque = deque()
    counter = 0

    def enqueue(z, om, upper, singular):
        nonlocal counter
        pending.append((counter, z, om, upper, singular))
        counter += 1
        return counter - 1

    seeds = [enqueue(z, omega0, math.pi, False) for z in all_roots(fam(omega0)).roots]
    while pending:
        if counter > MAX_SEGMENTS:
            raise NoAdmissibleBranch(f"branch graph for m={m} exceeded {MAX_SEGMENTS} segments")
        sid, z0, om0, upper, singular = pending.popleft()
        try:
            path = continue_branch(fam, z0, om0, 0.0, step=STEP, flag=flag)
        except (StepUnderflow, BranchJump) as exc:
            om_u, z_u, path = exc.omega, exc.z, exc.path
            if abs(z_u.imag) > 1e-3 * max(1.0, abs(z_u)):
                raise NoAdmissibleBranch(
                    f"m={m}: root tracking failed off the real axis at omega={om_u!r}"
                ) from exc
            om_b, z_b = _real_double_root(m, om_u, z_u)
            om_b = min(om_b, path.samples[-1][0])
            seg = Segment(sid, path, upper, om_b, path.samples[0][1], z_b,
                          upper_singular=singular, lower_singular=True)
            segments[sid] = seg
            known = next((s for s in splits if abs(s[0] - om_b) < 1e-8 and abs(s[1] - z_b) < 1e-5), None)
            if known is not None:
                seg.children.extend(known[2])
                continue
            om_next = om_b - SPLIT_GAP
            if om_next <= 0:
                continue
            roots = np.array(all_roots(fam(om_next)).roots)
            nearest = np.argsort(np.abs(roots - z_b), kind="stable")[:2]
            kids = sorted((complex(roots[i]) for i in nearest), key=lambda r: (r.imag, r.real))
            child_ids = [enqueue(kz, om_next, om_b, True) for kz in kids]
            seg.children.extend(child_ids)
            splits.append((om_b, z_b, child_ids))
            continue
        segments[sid] = Segment(sid, path, upper, 0.0, path.samples[0][1], path.end[1], upper_singular=singular)

    ordered = [segments[i] for i in sorted(segments)]
    for seg in ordered:
        zs = seg.path.zs
        scale = np.maximum(1.0, np.abs(zs))
        if np.all(np.abs(zs.imag) <= 1e-8 * scale):
            seg.complex_sign = 0
            continue
        k = int(np.argmax(np.abs(zs.imag)))
        seg.complex_sign = 1 if zs[k].imag > 0 else -1
        seg.admissible = integrand(m, seg.path.samples[k][0], zs[k]) > 0
    return BranchGraph(m, ordered, seeds, [(s[0], s[1]) for s in splits])


def branch_graph(m: int) -> BranchGraph:
    """Tracked root branches of R_m(e^{iw/2}, .) over (0, pi); cached per m."""
    check_canonical_index(m)
    with _graph_lock:
        hit = _graph_cache.get(m)
    if hit is not None:
        return hit
    graph = _track(m)
    with _graph_lock:
        _graph_cache.setdefault(m, graph)
        return _graph_cache[m]


def _sqrt_model(omega, end_omega, end_z, ref_omega, ref_z):
    t = abs(omega - end_omega) / abs(ref_omega - end_omega)
    return end_z + (ref_z - end_z) * math.sqrt(t)


def root_on_segment(m: int, seg: Segment, omega: float) -> complex:
    """The root of R_m at omega that belongs to the given segment."""
    om = seg.path.omegas
    zs = seg.path.zs
    if omega >= om[0]:
        if seg.upper_singular and seg.upper > om[0]:
            guess = _sqrt_model(omega, seg.upper, seg.z_upper, om[0], zs[0])
        else:
            guess = zs[0]
    elif omega <= om[-1]:
        if seg.lower_singular and om[-1] > seg.lower:
            guess = _sqrt_model(omega, seg.lower, seg.z_lower, om[-1], zs[-1])
        else:
            guess = zs[-1]
    else:
        asc_om, asc_z = om[::-1], zs[::-1]
        guess = complex(np.interp(omega, asc_om, asc_z.real), np.interp(omega, asc_om, asc_z.imag))
    p = family(m)(omega)
    c = p.array()[::-1]
    z = complex(guess)
    ok = False
    for _ in range(40):
        val = np.polyval(c, z)
        der = np.polyval(np.polyder(c), z)
        if der == 0:
            break
        step = val / der
        z -= step
        if abs(step) <= 1e-15 * max(1.0, abs(z)):
            ok = True
            break
    if ok:
        ok = abs(z - guess) <= 1e-2 * max(1.0, abs(guess))
        if seg.complex_sign and ok:
            ok = z.imag * seg.complex_sign >= 0
    if not ok:
        roots = np.array(all_roots(p).roots)
        if seg.complex_sign:
            same_side = roots[roots.imag * seg.complex_sign >= 0]
            roots = same_side if len(same_side) else roots
        z = complex(roots[np.argmin(np.abs(roots - guess))])
    return z


def branch_integrand(m: int, seg: Segment, omega: float) -> float:
    """Integrand along a segment: zero where the sample is real or fails admissibility."""
    z = root_on_segment(m, seg, omega)
    if abs(z.imag) < IM_CLAMP or not admissible(m, z):
        return 0.0
    return max(integrand(m, omega, z), 0.0)


def _segment_window(seg: Segment, alpha: float) -> tuple[float, float] | None:
    lo, hi = max(alpha, seg.lower), seg.upper
    if hi <= lo or not seg.complex_sign or not seg.admissible:
        return None
    return lo, hi


def _substituted(m: int, seg: Segment, lo: float, hi: float):
    # omega = lo + (hi - lo) sin^2(theta) removes square-root behaviour at both ends
    span = hi - lo

    def g(theta: float) -> float:
        omega = lo + span * math.sin(theta) ** 2
        return branch_integrand(m, seg, omega) * span * math.sin(2 * theta)

    return g


@dataclass
class BranchCandidate:
    branch_id: int
    segment_ids: list[int]
    volume: float
    error: float
    z_alpha: complex


@dataclass
class BranchSelection:
    m: int
    alpha: float
    candidates: list[BranchCandidate]
    chosen: BranchCandidate
    samples_used: int


def _best_paths(graph: BranchGraph, alpha: float, values: dict[int, tuple[float, float]]):
    """Dynamic programme over the segment graph: best (value, error, path) from each segment."""
    segs = {s.id: s for s in graph.segments}
    memo: dict[int, tuple[float, float, list[int]]] = {}

    def best(sid: int):
        if sid in memo:
            return memo[sid]
        seg = segs[sid]
        v, e = values.get(sid, (0.0, 0.0))
        tail = (0.0, 0.0, [])
        for c in sorted(seg.children):
            if segs[c].upper <= alpha:
                continue
            cand = best(c)
            if cand[0] > tail[0] or not tail[2]:
                tail = cand
        memo[sid] = (v + tail[0], e + tail[1], [sid] + tail[2])
        return memo[sid]

    return best


def select_branch(m: int, alpha: float, tol: float = DEFAULT_TOL, method: str = "gk",
                  simpson_n: int = 4000) -> BranchSelection:
    """Integrate every branch over [alpha, pi] and pick the one with maximal volume."""
    check_canonical_index(m)
    if not 0 < alpha < math.pi:
        raise ValueError("alpha must lie in (0, pi)")
    graph = branch_graph(m)
    windows = {s.id: w for s in graph.segments if (w := _segment_window(s, alpha)) is not None}
    share = tol / max(1, len(windows))
    values: dict[int, tuple[float, float]] = {}
    used = 0
    segs = {s.id: s for s in graph.segments}
    for sid, (lo, hi) in sorted(windows.items()):
        g = _substituted(m, segs[sid], lo, hi)
        if method == "gk":
            r = adaptive_gk(g, 0.0, math.pi / 2, tol=share)
            values[sid] = (r.value, r.error)
            used += r.evaluations
        elif method == "simpson":
            values[sid] = (composite_simpson(g, 0.0, math.pi / 2, simpson_n), 0.0)
            used += simpson_n + 1
        else:
            raise ValueError(f"unknown quadrature method {method!r}")
    best = _best_paths(graph, alpha, values)
    candidates = []
    for sid in graph.seeds:
        v, e, ids = best(sid)
        last = next((i for i in reversed(ids) if segs[i].lower <= alpha <= segs[i].upper), ids[-1])
        z_alpha = root_on_segment(m, segs[last], alpha) if segs[last].lower <= alpha else segs[last].z_lower
        candidates.append(BranchCandidate(last, ids, v, e, z_alpha))
    if not candidates:
        raise NoAdmissibleBranch(f"no branches for m={m}")
    # equal volumes go to the smaller branch id
    chosen = max(candidates, key=lambda c: (c.volume, -c.branch_id))
    return BranchSelection(m, alpha, candidates, chosen, used)


# --- volumes ----------------------------------------------------------------

@dataclass(frozen=True)
class VolumeResult:
    m: int
    alpha: float
    volume: float
    branch_id: int
    quad_error_estimate: float
    samples_used: int
    status: str = "ok"

    @property
    def hyperbolic(self) -> bool:
        return self.status == "ok"

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class AlphaMaxEstimate:
    m: int
    alpha_max: float
    bracket_width: float


def _hyperbolic_at(m: int, alpha: float) -> bool:
    """True when some admissible branch has a strictly positive integral over [alpha, pi]."""
    graph = branch_graph(m)
    for seg in graph.segments:
        if seg.complex_sign and seg.admissible and seg.upper > alpha and seg.lower < seg.upper:
            omega = 0.5 * (max(alpha, seg.lower) + seg.upper)
            if branch_integrand(m, seg, omega) > 0:
                return True
    return False


def estimate_alpha_max(m: int, tol: float = 1e-10) -> AlphaMaxEstimate:
    """Bisect for the cone angle where hyperbolic structures stop, inside [2pi/3, pi)."""
    check_canonical_index(m)
    lo, hi = 2 * math.pi / 3 - tol, math.pi - SEED_EPS
    if not _hyperbolic_at(m, lo):
        return AlphaMaxEstimate(m, lo, 0.0)
    if _hyperbolic_at(m, hi):
        return AlphaMaxEstimate(m, hi, 0.0)
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        if _hyperbolic_at(m, mid):
            lo = mid
        else:
            hi = mid
    return AlphaMaxEstimate(m, 0.5 * (lo + hi), hi - lo)


_alpha_max_cache: dict[int, float] = {}


def alpha_max(m: int) -> float:
    with _graph_lock:
        hit = _alpha_max_cache.get(m)
    if hit is None:
        hit = estimate_alpha_max(m, ALPHA_MAX_TOL).alpha_max
        with _graph_lock:
            _alpha_max_cache.setdefault(m, hit)
    return hit


def volume(m: int, alpha: float, tol: float = DEFAULT_TOL, method: str = "gk") -> VolumeResult:
    """Vol E_m(alpha); zero with status 'non_hyperbolic' for alpha at or past alpha_max."""
    check_canonical_index(m)
    if not 0 < alpha < math.pi:
        raise ValueError("alpha must lie in (0, pi)")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if alpha >= alpha_max(m):
        return VolumeResult(m, alpha, 0.0, -1, 0.0, 0, "non_hyperbolic")
    sel = select_branch(m, alpha, tol, method=method)
    c = sel.chosen
    if c.volume <= 0:
        raise NoAdmissibleBranch(f"m={m}, alpha={alpha!r}: no admissible branch with positive volume")
    return VolumeResult(m, alpha, c.volume, c.branch_id, c.error, sel.samples_used)


def cyclic_cover_volume(m: int, k: int, tol: float = DEFAULT_TOL) -> float:
    """Hyperbolic volume of the k-fold cyclic cover branched over the link, k >= 3."""
    if k < 3:
        raise ValueError("k must be at least 3")
    return k * volume(m, angle_from_fraction(Fraction(2, k)), tol).volume


def volume_table(m: int, angles, tol: float = DEFAULT_TOL, jobs: int = 1) -> list[VolumeResult]:
    """volume() over a list of angles, in input order; failures become rows with an error status."""

    def row(alpha):
        try:
            return volume(m, alpha, tol)
        except (DoubleTwistError, ValueError) as exc:
            return VolumeResult(m, alpha, float("nan"), -1, float("nan"), 0, f"error: {exc}")

    angles = list(angles)
    if jobs > 1 and len(angles) > 1:
        from concurrent.futures import ThreadPoolExecutor

        branch_graph(m)  # build the shared cache once before fanning out
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(row, angles))
    return [row(a) for a in angles]
