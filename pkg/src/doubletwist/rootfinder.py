"""Polynomial roots and one-parameter root continuation.

all_roots runs Aberth-Ehrlich simultaneous iteration from points on a
circle, then polishes each root with a few Newton steps.  continue_branch
follows one root of a polynomial family p_omega(z) with a secant predictor
and a Newton corrector, halving the step whenever the corrector struggles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BranchJump, NoConvergence, StepUnderflow
from .polyring import CPoly

CLUSTER_TOL = 1e-7
RESIDUAL_TOL = 1e-12
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class RootSet:
    roots: tuple[complex, ...]
    residuals: tuple[float, ...]
    degree: int


def _horner_with_derivative(coeffs_desc: np.ndarray, z: np.ndarray):
    p = np.zeros_like(z) + coeffs_desc[0]
    dp = np.zeros_like(z)
    for c in coeffs_desc[1:]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _backward_error(coeffs_desc: np.ndarray, z: np.ndarray) -> np.ndarray:
    p, _ = _horner_with_derivative(coeffs_desc, z)
    scale, _ = _horner_with_derivative(np.abs(coeffs_desc).astype(complex), np.abs(z).astype(complex))
    return np.abs(p) / np.maximum(scale.real, np.finfo(float).tiny)


def _initial_guesses(coeffs_desc: np.ndarray) -> np.ndarray:
    n = len(coeffs_desc) - 1
    a = np.abs(coeffs_desc)
    # Fujiwara-style radius, geometric mean of the ratios keeps it tight enough
    ratios = [(a[k] / a[0]) ** (1.0 / k) for k in range(1, n + 1) if a[k] > 0]
    radius = max(ratios) if ratios else 1.0
    centre = -coeffs_desc[1] / (n * coeffs_desc[0])
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    return centre + radius * np.exp(1j * angles)


def aberth(coeffs_desc: np.ndarray, z0: np.ndarray | None = None, tol: float = RESIDUAL_TOL,
           max_iter: int = 500) -> np.ndarray:
    """Aberth-Ehrlich iteration on a polynomial given by descending coefficients."""
    n = len(coeffs_desc) - 1
    z = _initial_guesses(coeffs_desc) if z0 is None else np.array(z0, dtype=complex)
    for _ in range(max_iter):
        p, dp = _horner_with_derivative(coeffs_desc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            corr = ratio / (1.0 - ratio * inv.sum(axis=1))
        corr = np.where(np.isfinite(corr), corr, 0.0)
        z = z - corr
        if np.all(_backward_error(coeffs_desc, z) < tol * n):
            return z
    raise NoConvergence(f"Aberth iteration did not converge in {max_iter} steps")


def newton_polish(coeffs_desc: np.ndarray, z: complex, steps: int = 3) -> complex:
    for _ in range(steps):
        p, dp = _horner_with_derivative(coeffs_desc, np.array([z]))
        if dp[0] == 0:
            break
        step = p[0] / dp[0]
        if not np.isfinite(step):
            break
        z_new = z - step
        if abs(_backward_error(coeffs_desc, np.array([z_new]))[0]) > abs(
            _backward_error(coeffs_desc, np.array([z]))[0]
        ):
            break
        z = z_new
    return complex(z)


def _merge_clusters(z: np.ndarray, tol: float) -> np.ndarray:
    z = z.copy()
    n = len(z)
    seen = np.zeros(n, dtype=bool)
    for i in range(n):
        if seen[i]:
            continue
        members = [i] + [k for k in range(i + 1, n) if not seen[k] and abs(z[k] - z[i]) < tol]
        if len(members) > 1:
            z[members] = z[members].mean()
            seen[members] = True
    return z


def all_roots(p: CPoly, tol: float = RESIDUAL_TOL) -> RootSet:
    """Every root of p, listed with multiplicity."""
    if p.degree < 1:
        raise ValueError("need degree >= 1")
    c = p.array()[::-1]
    c = c / c[0]
    n = len(c) - 1
    # zero roots are exact; peel them off so the iteration never sees them
    n_zero = 0
    while n_zero < n and c[n - n_zero] == 0:
        n_zero += 1
    core = c[: n + 1 - n_zero]
    roots = np.zeros(0, dtype=complex)
    if len(core) > 1:
        roots = aberth(core, tol=tol)
        roots = np.array([newton_polish(core, r) for r in roots])
        roots = _merge_clusters(roots, CLUSTER_TOL)
    roots = np.concatenate([roots, np.zeros(n_zero, dtype=complex)])
    order = np.lexsort((roots.imag, roots.real))
    roots = roots[order]
    res = _backward_error(c, roots)
    return RootSet(tuple(complex(r) for r in roots), tuple(float(x) for x in res), n)


# --- continuation -----------------------------------------------------------

@dataclass
class BranchPath:
    """A root z(omega) followed from omega0 to omega1."""

    samples: list[tuple[float, complex]] = field(default_factory=list)
    admissible_at: list[bool] = field(default_factory=list)

    @property
    def omegas(self) -> np.ndarray:
        return np.array([o for o, _ in self.samples])

    @property
    def zs(self) -> np.ndarray:
        return np.array([z for _, z in self.samples])

    @property
    def end(self) -> tuple[float, complex]:
        return self.samples[-1]


def _newton(coeffs_desc: np.ndarray, z: complex, tol: float, max_iter: int):
    """Newton iteration; returns (root, iterations) or (None, max_iter)."""
    for it in range(1, max_iter + 1):
        p, dp = _horner_with_derivative(coeffs_desc, np.array([z]))
        if dp[0] == 0:
            return None, it
        step = complex(p[0] / dp[0])
        z = z - step
        if abs(step) <= tol * max(1.0, abs(z)):
            return z, it
        # near a double root the step size stalls above tol; rounding-level residual is enough
        if _backward_error(coeffs_desc, np.array([z]))[0] <= 8 * len(coeffs_desc) * _EPS:
            return z, it
    return None, max_iter


def continue_branch(
    family: Callable[[float], CPoly],
    z0: complex,
    omega0: float,
    omega1: float,
    step: float = math.pi / 2000,
    min_step: float = 1e-9,
    max_newton: int = 5,
    jump_ratio: float = 0.3,
    flag: Callable[[float, complex], bool] | None = None,
) -> BranchPath:
    """Follow the root of family(omega) starting at z0 from omega0 to omega1.

    The corrector result is rejected when Newton needs more than max_newton
    iterations or when it lands farther from the prediction than jump_ratio
    times the predicted displacement (plus a small floor).  Rejection halves
    the step; below min_step the path is abandoned.
    """
    direction = 1.0 if omega1 >= omega0 else -1.0
    c0 = family(omega0).array()[::-1]
    if abs(np.polyval(c0, z0)) > 1e-8 * max(1.0, CPoly.from_array(c0[::-1]).abs_eval(z0)):
        raise ValueError("z0 is not a root of family(omega0)")
    z_root, _ = _newton(c0, complex(z0), 1e-14, 20)
    z = z0 if z_root is None else z_root

    path = BranchPath()
    _record(path, omega0, z, flag)
    omega = omega0
    h = step
    prev: tuple[float, complex] | None = None
    while direction * (omega1 - omega) > 0:
        h = min(h, abs(omega1 - omega))
        target = omega + direction * h
        if prev is None:
            z_pred = z + _tangent(family, omega, z) * (target - omega)
        else:
            slope = (z - prev[1]) / (omega - prev[0])
            z_pred = z + slope * (target - omega)
        coeffs = family(target).array()[::-1]
        z_new, iters = _newton(coeffs, z_pred, 1e-14, max_newton + 3)
        jumped = False
        ok = z_new is not None and iters <= max_newton
        if ok:
            moved = abs(z_pred - z)
            if abs(z_new - z_pred) > jump_ratio * moved + 1e-9 * max(1.0, abs(z)):
                ok = False
                jumped = True
        if not ok:
            h /= 2
            if h < min_step:
                err = BranchJump if jumped else StepUnderflow
                raise err(f"continuation stalled at omega={omega!r}", omega=omega, z=z, path=path)
            continue
        prev = (omega, z)
        omega, z = target, z_new
        _record(path, omega, z, flag)
        if iters <= 2:
            h = min(2 * h, step)
    return path


def _record(path: BranchPath, omega: float, z: complex, flag):
    path.samples.append((float(omega), complex(z)))
    path.admissible_at.append(bool(flag(omega, z)) if flag is not None else True)


def _tangent(family, omega: float, z: complex, d: float = 1e-7) -> complex:
    """dz/domega = -(dp/domega) / (dp/dz) by central differences in omega."""
    p = family(omega)
    lo = family(omega - d)(z)
    hi = family(omega + d)(z)
    dpdz = p.derivative()(z)
    if dpdz == 0:
        return 0j
    return -((hi - lo) / (2 * d)) / dpdz
