"""Exact bivariate integer polynomials and univariate complex polynomials.

MPolyZ is a sparse map {(e1, e2): coefficient} with Python ints as
coefficients, so nothing ever overflows.  Laurent monomials are never stored;
callers clear denominators with an explicit monomial factor.

The text format used by the CLI and golden files writes terms in descending
lex order as ``c*M^a*L^b`` joined by `` + `` / `` - ``, dropping unit
coefficients and unit exponents.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DegreeZero, VarMismatch, ZeroPolynomial

Exp = tuple[int, int]


class MPolyZ:
    """Sparse polynomial in two variables with integer coefficients."""

    __slots__ = ("_terms", "varnames", "_hash")

    def __init__(self, terms: Mapping[Exp, int] | None = None, varnames=("s", "w")):
        clean = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError(f"negative exponent {(a, b)}")
            c = int(c)
            if c:
                clean[(int(a), int(b))] = c
        self._terms = clean
        self.varnames = tuple(varnames)
        self._hash = None

    # construction helpers

    @classmethod
    def const(cls, c: int, varnames=("s", "w")) -> "MPolyZ":
        return cls({(0, 0): c}, varnames)

    @classmethod
    def monomial(cls, e1: int, e2: int, c: int = 1, varnames=("s", "w")) -> "MPolyZ":
        return cls({(e1, e2): c}, varnames)

    @classmethod
    def gens(cls, varnames=("s", "w")) -> tuple["MPolyZ", "MPolyZ"]:
        return cls({(1, 0): 1}, varnames), cls({(0, 1): 1}, varnames)

    @property
    def terms(self) -> dict[Exp, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def degree(self, var: int) -> int:
        if not self._terms:
            return -1
        return max(e[var] for e in self._terms)

    def min_degree(self, var: int) -> int:
        return min(e[var] for e in self._terms)

    def sorted_terms(self) -> list[tuple[Exp, int]]:
        """Terms in descending lex order (first variable dominant)."""
        return sorted(self._terms.items(), reverse=True)

    def leading_term(self) -> tuple[Exp, int]:
        if not self._terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        e = max(self._terms)
        return e, self._terms[e]

    # arithmetic

    def _coerce(self, other) -> "MPolyZ":
        if isinstance(other, MPolyZ):
            if other.varnames != self.varnames:
                raise VarMismatch(f"{self.varnames} vs {other.varnames}")
            return other
        if isinstance(other, int):
            return MPolyZ.const(other, self.varnames)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return MPolyZ(out, self.varnames)

    __radd__ = __add__

    def __neg__(self):
        return MPolyZ({e: -c for e, c in self._terms.items()}, self.varnames)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return MPolyZ({e: c * other for e, c in self._terms.items()}, self.varnames)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exp, int] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, 0) + c1 * c2
        return MPolyZ(out, self.varnames)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = MPolyZ.const(1, self.varnames)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = MPolyZ.const(other, self.varnames)
        if not isinstance(other, MPolyZ):
            return NotImplemented
        return self.varnames == other.varnames and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.varnames, frozenset(self._terms.items())))
        return self._hash

    def mul_monomial(self, e1: int, e2: int) -> "MPolyZ":
        return MPolyZ({(a + e1, b + e2): c for (a, b), c in self._terms.items()}, self.varnames)

    def divexact(self, other: "MPolyZ") -> "MPolyZ":
        """Exact quotient self / other; raises ValueError if not divisible."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        (la, lb), lc = other.leading_term()
        rem = dict(self._terms)
        quot: dict[Exp, int] = {}
        while rem:
            (ra, rb) = max(rem)
            rc = rem[(ra, rb)]
            qa, qb = ra - la, rb - lb
            if qa < 0 or qb < 0 or rc % lc:
                raise ValueError("polynomial division is not exact")
            qc = rc // lc
            quot[(qa, qb)] = qc
            for (a, b), c in other._terms.items():
                k = (a + qa, b + qb)
                v = rem.get(k, 0) - qc * c
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return MPolyZ(quot, self.varnames)

    def content(self) -> int:
        return reduce(math.gcd, (abs(c) for c in self._terms.values()), 0)

    # evaluation

    def __call__(self, v1, v2):
        """Evaluate at a point; works for ints, Fractions, complex and numpy arrays."""
        acc = 0
        for (a, b), c in self._terms.items():
            acc = acc + c * v1 ** a * v2 ** b
        return acc

    def abs_eval(self, v1, v2) -> float:
        """Sum of |c| |v1|^a |v2|^b, the natural scale for a residual at (v1, v2)."""
        a1, a2 = abs(v1), abs(v2)
        return float(sum(abs(c) * a1 ** a * a2 ** b for (a, b), c in self._terms.items()))

    def rename(self, varnames) -> "MPolyZ":
        return MPolyZ(self._terms, varnames)

    def __repr__(self):
        return f"MPolyZ({to_text(self)!r}, varnames={self.varnames})"

    def __str__(self):
        return to_text(self)


def mp_arith(a: MPolyZ, b: MPolyZ, op: str) -> MPolyZ:
    if a.varnames != b.varnames:
        raise VarMismatch(f"{a.varnames} vs {b.varnames}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def mp_substitute_monomial(p: MPolyZ, exponent_shift: int, varnames=("M", "L")) -> MPolyZ:
    """Substitute s -> M, w -> L*M^shift.

    For a negative shift the result is multiplied by M^(|shift| * deg_w p) so
    that it stays a polynomial.
    """
    clear = -exponent_shift * p.degree(1) if exponent_shift < 0 else 0
    out: dict[Exp, int] = {}
    for (a, b), c in p.items():
        k = (a + exponent_shift * b + clear, b)
        out[k] = out.get(k, 0) + c
    return MPolyZ(out, varnames)


def mp_primitive(p: MPolyZ) -> MPolyZ:
    """Divide out the integer content and make the lex-leading coefficient positive."""
    if p.is_zero():
        raise ZeroPolynomial("primitive part of the zero polynomial")
    g = p.content()
    _, lc = p.leading_term()
    if lc < 0:
        g = -g
    return MPolyZ({e: c // g for e, c in p.items()}, p.varnames)


def strip_monomial(p: MPolyZ) -> MPolyZ:
    """Remove the largest monomial factor M^a L^b."""
    if p.is_zero():
        raise ZeroPolynomial("zero polynomial")
    return p.mul_monomial(-p.min_degree(0), -p.min_degree(1))


def normalize_unit(p: MPolyZ) -> MPolyZ:
    """Canonical representative modulo +-monomial units and integer content."""
    return mp_primitive(strip_monomial(p))


def equal_up_to_unit(a: MPolyZ, b: MPolyZ) -> bool:
    return normalize_unit(a) == normalize_unit(b)


# --- resultants -------------------------------------------------------------

ZPoly = Sequence[MPolyZ]  # polynomial in z, ascending, with MPolyZ coefficients


def _trim(p: ZPoly) -> list[MPolyZ]:
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def sylvester_matrix(a: ZPoly, b: ZPoly) -> list[list[MPolyZ]]:
    a, b = _trim(a), _trim(b)
    p, q = len(a) - 1, len(b) - 1
    n = p + q
    zero = MPolyZ({}, a[0].varnames)
    rows = []
    for i in range(q):
        row = [zero] * n
        for k, c in enumerate(reversed(a)):
            row[i + k] = c
        rows.append(row)
    for i in range(p):
        row = [zero] * n
        for k, c in enumerate(reversed(b)):
            row[i + k] = c
        rows.append(row)
    return rows


def bareiss_det(matrix: list[list[MPolyZ]]) -> MPolyZ:
    """Fraction-free determinant; every division is exact."""
    M = [list(r) for r in matrix]
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    varnames = M[0][0].varnames
    sign = 1
    prev = MPolyZ.const(1, varnames)
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if swap is None:
                return MPolyZ({}, varnames)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]).divexact(prev)
            M[i][k] = MPolyZ({}, varnames)
        prev = pivot
    det = M[n - 1][n - 1]
    return det if sign > 0 else -det


def resultant_z(a: ZPoly, b: ZPoly) -> MPolyZ:
    """Sylvester resultant Res_z(a, b), computed fraction-free."""
    a, b = _trim(a), _trim(b)
    if len(a) < 2 or len(b) < 2:
        raise DegreeZero("both polynomials need degree >= 1 in z")
    return bareiss_det(sylvester_matrix(a, b))


# --- text / json ------------------------------------------------------------

def _monomial_text(exps: Exp, varnames) -> list[str]:
    parts = []
    for name, e in zip(varnames, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return parts


def to_text(p: MPolyZ) -> str:
    if p.is_zero():
        return "0"
    out = []
    for i, (e, c) in enumerate(p.sorted_terms()):
        mono = _monomial_text(e, p.varnames)
        mag = abs(c)
        factors = ([str(mag)] if (mag != 1 or not mono) else []) + mono
        body = "*".join(factors)
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


_TERM = re.compile(r"^(\d+)?((?:\*?[A-Za-z]\w*(?:\^\d+)?)*)$")


def from_text(text: str, varnames=("M", "L")) -> MPolyZ:
    """Parse the text format written by :func:`to_text`."""
    s = text.replace(" ", "")
    if s == "0":
        return MPolyZ({}, varnames)
    tokens = re.findall(r"[+-]?[^+-]+", s)
    terms: dict[Exp, int] = {}
    for tok in tokens:
        sign = -1 if tok.startswith("-") else 1
        tok = tok.lstrip("+-")
        factors = tok.split("*")
        coeff = 1
        exps = [0, 0]
        for f in factors:
            if f.isdigit():
                coeff *= int(f)
                continue
            name, _, e = f.partition("^")
            if name not in varnames:
                raise ValueError(f"unknown variable {name!r} in {text!r}")
            exps[varnames.index(name)] += int(e) if e else 1
        k = (exps[0], exps[1])
        terms[k] = terms.get(k, 0) + sign * coeff
    return MPolyZ(terms, varnames)


def to_json_terms(p: MPolyZ) -> list[dict]:
    n1, n2 = p.varnames
    return [{f"e_{n1}": e[0], f"e_{n2}": e[1], "coeff": str(c)} for e, c in p.sorted_terms()]


def from_json_terms(terms: Iterable[dict], varnames=("M", "L")) -> MPolyZ:
    n1, n2 = varnames
    return MPolyZ({(t[f"e_{n1}"], t[f"e_{n2}"]): int(t["coeff"]) for t in terms}, varnames)


# --- complex univariate -----------------------------------------------------

@dataclass(frozen=True)
class CPoly:
    """Univariate complex polynomial, coefficients in ascending degree."""

    coefficients: tuple[complex, ...]

    def __post_init__(self):
        c = [complex(x) for x in self.coefficients]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c))

    @classmethod
    def from_array(cls, arr) -> "CPoly":
        return cls(tuple(complex(x) for x in arr))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def array(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=complex)

    def __call__(self, z):
        return cpoly_eval(self, z)

    def derivative(self) -> "CPoly":
        return CPoly(tuple(k * c for k, c in enumerate(self.coefficients) if k))

    def scale(self, c: complex) -> "CPoly":
        return CPoly(tuple(c * x for x in self.coefficients))

    def __add__(self, other: "CPoly") -> "CPoly":
        n = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (0j,) * (n - len(self.coefficients))
        b = other.coefficients + (0j,) * (n - len(other.coefficients))
        return CPoly(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: "CPoly") -> "CPoly":
        return self + other.scale(-1)

    def __mul__(self, other):
        if not isinstance(other, CPoly):
            return self.scale(other)
        if not self.coefficients or not other.coefficients:
            return CPoly(())
        return CPoly.from_array(np.convolve(self.array(), other.array()))

    __rmul__ = __mul__

    def abs_eval(self, z) -> float:
        """sum |c_k| |z|^k, the scale against which residuals are measured."""
        r = abs(z)
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * r + abs(c)
        return acc


def cpoly_eval(p: CPoly, z):
    """Horner evaluation."""
    acc = 0j
    for c in reversed(p.coefficients):
        acc = acc * z + c
    return acc
