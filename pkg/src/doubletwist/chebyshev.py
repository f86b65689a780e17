"""Chebyshev polynomials of the second kind S_j, for every integer j.

S_0 = 1, S_1 = v and S_j = v S_{j-1} - S_{j-2}.  Negative indices come from
running the same recurrence backwards, so S_{-1} = 0 and S_{-j-2} = -S_j.

All evaluators are generic in the scalar type: complex, int and
fractions.Fraction all work, which is what the exact tests rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any

import numpy as np

from .errors import NotUnimodular

DEFAULT_RTOL = 1e-9


@dataclass(frozen=True)
class ChebPair:
    """Consecutive values (S_j(v), S_{j-1}(v))."""

    j: int
    s_j: Any
    s_jm1: Any
    v: Any

    def previous(self) -> "ChebPair":
        # S_{j-2} = v S_{j-1} - S_j
        return ChebPair(self.j - 1, self.s_jm1, self.v * self.s_jm1 - self.s_j, self.v)

    def next(self) -> "ChebPair":
        return ChebPair(self.j + 1, self.v * self.s_j - self.s_jm1, self.s_j, self.v)


def cheb_pair(j: int, v) -> ChebPair:
    """Return the pair (S_j(v), S_{j-1}(v)) by iterating the recurrence."""
    one = v ** 0
    a, b = one, one - one  # (S_0, S_{-1})
    if j >= 0:
        for _ in range(j):
            a, b = v * a - b, a
    else:
        for _ in range(-j):
            a, b = b, v * b - a
    return ChebPair(j, a, b, v)


def cheb(j: int, v):
    """S_j(v)."""
    return cheb_pair(j, v).s_j


def cheb_array(j: int, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised (S_j, S_{j-1}) over an array of arguments."""
    v = np.asarray(v, dtype=complex)
    a = np.ones_like(v)
    b = np.zeros_like(v)
    if j >= 0:
        for _ in range(j):
            a, b = v * a - b, a
    else:
        for _ in range(-j):
            a, b = b, v * b - a
    return a, b


@dataclass(frozen=True)
class UPolyZ:
    """Univariate integer polynomial, coefficients in ascending degree."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coefficients)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(int(x) for x in c))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, v):
        acc = v * 0
        for c in reversed(self.coefficients):
            acc = acc * v + c
        return acc

    def __add__(self, other: "UPolyZ") -> "UPolyZ":
        n = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (0,) * (n - len(self.coefficients))
        b = other.coefficients + (0,) * (n - len(other.coefficients))
        return UPolyZ(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "UPolyZ":
        return UPolyZ(tuple(-x for x in self.coefficients))

    def __sub__(self, other: "UPolyZ") -> "UPolyZ":
        return self + (-other)

    def __mul__(self, other: "UPolyZ") -> "UPolyZ":
        if not self.coefficients or not other.coefficients:
            return UPolyZ(())
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for k, b in enumerate(other.coefficients):
                out[i + k] += a * b
        return UPolyZ(tuple(out))

    def shift(self) -> "UPolyZ":
        """Multiply by the variable."""
        if not self.coefficients:
            return self
        return UPolyZ((0,) + self.coefficients)


@lru_cache(maxsize=None)
def cheb_upoly(j: int) -> UPolyZ:
    """Exact integer coefficients of S_j."""
    a, b = UPolyZ((1,)), UPolyZ(())
    if j >= 0:
        for _ in range(j):
            a, b = a.shift() - b, a
    else:
        for _ in range(-j):
            a, b = b, b.shift() - a
    return a


def sl2_power(V, j: int, tol: float = 1e-9) -> np.ndarray:
    """V^j for V in SL(2, C), as S_j(tr V) I - S_{j-1}(tr V) V^{-1}."""
    V = np.asarray(V, dtype=complex)
    det = V[0, 0] * V[1, 1] - V[0, 1] * V[1, 0]
    if abs(det - 1) > tol:
        raise NotUnimodular(f"det V = {det!r}")
    pair = cheb_pair(j, V[0, 0] + V[1, 1])
    # inverse of a unimodular matrix is its adjugate
    V_inv = np.array([[V[1, 1], -V[0, 1]], [-V[1, 0], V[0, 0]]])
    return pair.s_j * np.eye(2) - pair.s_jm1 * V_inv


def quadratic_identity_residual(j: int, v):
    """S_j^2 + S_{j-1}^2 - v S_j S_{j-1} - 1, identically zero."""
    p = cheb_pair(j, v)
    return p.s_j ** 2 + p.s_jm1 ** 2 - v * p.s_j * p.s_jm1 - 1


def product_recurrence_residual(j: int, v):
    """S_j S_{j-1} - ((v^2-2) S_{j-1} S_{j-2} - S_{j-2} S_{j-3} + v), identically zero."""
    p = cheb_pair(j, v)
    p1 = p.previous()
    p2 = p1.previous()
    return p.s_j * p.s_jm1 - ((v * v - 2) * p1.s_j * p1.s_jm1 - p2.s_j * p2.s_jm1 + v)
