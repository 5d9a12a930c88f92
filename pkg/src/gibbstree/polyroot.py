"""Exact univariate polynomials over the rationals and Sturm root counting.

Coefficients are stored constant term first.  Everything that decides a sign
(remainder sequences, Sturm sign variations, bisection steps) runs in exact
rational arithmetic; floats only appear when a refined root is reported.

Coefficients may also be elements of a real quadratic field (``QuadSurd``),
which is enough to certify tangencies whose contact point is irrational.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

__all__ = [
    "Polynomial",
    "QuadSurd",
    "RootInterval",
    "SturmChain",
    "cauchy_bound",
    "count_roots",
    "descartes_positive_bound",
    "discriminant",
    "divrem",
    "gcd",
    "interpolate",
    "isolate_and_refine",
    "real_roots",
    "resultant",
    "sign_changes",
    "square_free_decomposition",
    "square_free_part",
    "sturm_chain",
    "to_fraction",
]


def to_fraction(x) -> Fraction:
    """Exact rational value of an int, float, str or Fraction.

    Floats are converted exactly (their binary value), then clipped to the
    closest convergent with denominator below 2**64.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot rationalize {x!r}")
        return Fraction(x).limit_denominator(2**64)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def _coerce(c):
    if isinstance(c, (int, float, str, Fraction)) and not isinstance(c, bool):
        return to_fraction(c)
    if isinstance(c, bool):
        return Fraction(int(c))
    return c


def _sign(c) -> int:
    if c > 0:
        return 1
    if c < 0:
        return -1
    return 0


class QuadSurd:
    """Exact number ``p + r*sqrt(d)`` with rational p, r and fixed d > 0."""

    __slots__ = ("p", "r", "d")

    def __init__(self, p, r, d):
        self.p = to_fraction(p)
        self.r = to_fraction(r)
        self.d = to_fraction(d)
        if self.d <= 0:
            raise ValueError("radicand must be positive")

    def _lift(self, other):
        if isinstance(other, QuadSurd):
            if other.d != self.d:
                raise ValueError("mixed radicands")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadSurd(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadSurd(self.p + o.p, self.r + o.r, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.p, -self.r, self.d)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadSurd(self.p - o.p, self.r - o.r, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadSurd(self.p * o.p + self.r * o.r * self.d,
                        self.p * o.r + self.r * o.p, self.d)

    __rmul__ = __mul__

    def inverse(self) -> "QuadSurd":
        norm = self.p * self.p - self.r * self.r * self.d
        if norm == 0:
            raise ZeroDivisionError("QuadSurd division by zero")
        return QuadSurd(self.p / norm, -self.r / norm, self.d)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = QuadSurd(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def sign(self) -> int:
        sp, sr = _sign(self.p), _sign(self.r)
        if sr == 0:
            return sp
        if sp == 0 or sp == sr:
            return sr
        # opposite signs: compare p^2 against r^2 d
        return sp if self.p * self.p > self.r * self.r * self.d else -sp

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.r == 0 and self.p == other
        if isinstance(other, QuadSurd):
            return self.d == other.d and self.p == other.p and self.r == other.r
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.r, self.d))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.p) + float(self.r) * math.sqrt(float(self.d))

    def __repr__(self):
        return f"QuadSurd({self.p}, {self.r}, {self.d})"


class Polynomial:
    """Dense univariate polynomial, coefficients constant term first.

    The zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_coerce(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "Polynomial":
        p = cls([lead])
        for r in roots:
            p = p * cls([-_coerce(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, float) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evalf(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = _coerce(other)
            return Polynomial([c * x for x in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = Polynomial([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, c):
        c = _coerce(c)
        return Polynomial([x / c for x in self.coeffs])

    def derivative(self) -> "Polynomial":
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self / self.lc

    def compose(self, inner: "Polynomial") -> "Polynomial":
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def to_json(self) -> list[str]:
        out = []
        for c in self.coeffs:
            if not isinstance(c, Fraction):
                raise TypeError("only rational polynomials serialize to JSON")
            out.append(f"{c.numerator}/{c.denominator}")
        return out

    @classmethod
    def from_json(cls, data) -> "Polynomial":
        if isinstance(data, str):
            data = json.loads(data)
        return cls([Fraction(s) for s in data])

    def __repr__(self):
        if self.is_zero():
            return "Polynomial(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(f"{c}" if i == 0 else f"({c})*x^{i}")
        return "Polynomial(" + " + ".join(terms) + ")"


def divrem(p: Polynomial, d: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Euclidean division: ``p = q*d + r`` with ``deg r < deg d``."""
    if d.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p.coeffs)
    dd = d.degree
    lc = d.lc
    if len(r) - 1 < dd:
        return Polynomial(), p
    q = [Fraction(0)] * (len(r) - dd)
    for i in range(len(r) - 1, dd - 1, -1):
        c = r[i]
        if c == 0:
            continue
        f = c / lc
        q[i - dd] = f
        for j, dc in enumerate(d.coeffs):
            r[i - dd + j] = r[i - dd + j] - f * dc
    return Polynomial(q), Polynomial(r[:dd])


def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic greatest common divisor (zero only when both inputs are zero)."""
    while not q.is_zero():
        p, q = q, divrem(p, q)[1]
    return p.monic()


def square_free_part(p: Polynomial) -> Polynomial:
    if p.is_zero():
        raise ValueError("square-free part of the zero polynomial")
    if p.degree <= 0:
        return p
    g = gcd(p, p.derivative())
    return divrem(p, g)[0]


def square_free_decomposition(p: Polynomial) -> list[Polynomial]:
    """Yun's algorithm: factors f_1, f_2, ... with p = c * prod f_i**i."""
    if p.is_zero():
        raise ValueError("decomposition of the zero polynomial")
    if p.degree <= 0:
        return []
    dp = p.derivative()
    a = gcd(p, dp)
    b = divrem(p, a)[0]
    c = divrem(dp, a)[0]
    d = c - b.derivative()
    out = []
    while b.degree > 0:
        f = gcd(b, d)
        out.append(f)
        b = divrem(b, f)[0]
        c = divrem(d, f)[0]
        d = c - b.derivative()
    return out


@dataclass(frozen=True)
class SturmChain:
    chain: tuple[Polynomial, ...]

    def __len__(self):
        return len(self.chain)

    def __getitem__(self, i):
        return self.chain[i]

    def signs(self, at) -> list[int]:
        if isinstance(at, float) and math.isinf(at):
            if at > 0:
                return [_sign(p.lc) for p in self.chain]
            return [_sign(p.lc) * (-1) ** p.degree for p in self.chain]
        x = to_fraction(at) if isinstance(at, float) else at
        return [_sign(p(x)) for p in self.chain]

    def sign_changes(self, at) -> int:
        return sign_changes(self, at)

    def count(self, lo=-math.inf, hi=math.inf) -> int:
        return self.sign_changes(lo) - self.sign_changes(hi)


def sturm_chain(p: Polynomial) -> SturmChain:
    """Sturm sequence of the square-free part of ``p``.

    P_{i+1} = -rem(P_{i-1}, P_i); stops at the first zero remainder.
    """
    if p.is_zero():
        raise ValueError("Sturm chain of the zero polynomial")
    p0 = square_free_part(p)
    chain = [p0]
    if p0.degree <= 0:
        return SturmChain(tuple(chain))
    chain.append(p0.derivative())
    while True:
        r = divrem(chain[-2], chain[-1])[1]
        if r.is_zero():
            break
        chain.append(-r)
    return SturmChain(tuple(chain))


def sign_changes(chain: SturmChain, at) -> int:
    """Strict sign alternations of the chain at ``at`` (zeros skipped).

    ``at`` is a rational (int, Fraction, finite float) or +/- math.inf.
    """
    count = 0
    prev = 0
    for s in chain.signs(at):
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


def count_roots(p: Polynomial, lo=-math.inf, hi=math.inf) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    if p.is_zero():
        raise ValueError("root count of the zero polynomial")
    if not lo < hi:
        return 0
    chain = sturm_chain(p)
    return chain.sign_changes(lo) - chain.sign_changes(hi)


def descartes_positive_bound(p: Polynomial) -> int:
    """Sign variations of the coefficient sequence."""
    if p.is_zero():
        raise ValueError("Descartes bound of the zero polynomial")
    return sign_changes(SturmChain(tuple(Polynomial([c]) for c in p.coeffs)), 0)


def cauchy_bound(p: Polynomial) -> Fraction:
    """Every root r satisfies |r| < 1 + max |a_i / a_n|."""
    if p.degree < 1:
        return Fraction(1)
    lc = abs(p.lc)
    return 1 + max(abs(c) / lc for c in p.coeffs[:-1])


@dataclass(frozen=True)
class RootInterval:
    """Isolating interval (lo, hi] of one distinct real root, or lo == hi for
    a root found exactly."""

    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return float((self.lo + self.hi) / 2)

    def __float__(self):
        return self.mid


def _refine_single(f: Polynomial, chain: SturmChain, lo: Fraction, hi: Fraction,
                   tol: Fraction) -> tuple[Fraction, Fraction]:
    # exactly one simple root of f in (lo, hi]
    if f(hi) == 0:
        return hi, hi
    flo = f(lo)
    vlo = None
    while hi - lo > tol:
        mid = (lo + hi) / 2
        fm = f(mid)
        if fm == 0:
            return mid, mid
        if flo != 0:
            if _sign(flo) != _sign(fm):
                hi = mid
            else:
                lo, flo = mid, fm
        else:
            # lo is itself a root (excluded); fall back to Sturm counts
            if vlo is None:
                vlo = chain.sign_changes(lo)
            if vlo - chain.sign_changes(mid) == 1:
                hi = mid
            else:
                lo, flo, vlo = mid, fm, None
    return lo, hi


def isolate_and_refine(p: Polynomial, lo=-math.inf, hi=math.inf,
                       tol: float = 1e-12) -> list[RootInterval]:
    """Disjoint isolating intervals, one per distinct real root in (lo, hi].

    Sturm-count bisection from the Cauchy bound, then sign bisection until
    every interval is at most ``tol`` wide.
    """
    if p.is_zero():
        raise ValueError("root isolation of the zero polynomial")
    if tol <= 0:
        raise ValueError("tol must be positive")
    f = square_free_part(p)
    if f.degree < 1:
        return []
    chain = sturm_chain(f)
    bound = cauchy_bound(f)
    left = -bound - 1 if lo == -math.inf else to_fraction(lo)
    right = bound if hi == math.inf else to_fraction(hi)
    if left >= right:
        return []
    ftol = to_fraction(float(tol))

    found: list[tuple[Fraction, Fraction]] = []
    stack = [(left, right, chain.sign_changes(left), chain.sign_changes(right))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n <= 0:
            continue
        if n == 1:
            found.append(_refine_single(f, chain, a, b, ftol))
            continue
        m = (a + b) / 2
        vm = chain.sign_changes(m)
        stack.append((m, b, vm, vb))
        stack.append((a, m, va, vm))

    factors = square_free_decomposition(p)
    out = []
    for a, b in sorted(found):
        mult = 1
        for i, fac in enumerate(factors, start=1):
            if fac.degree < 1:
                continue
            if a == b:
                hit = fac(a) == 0
            else:
                hit = count_roots(fac, a, b) == 1
            if hit:
                mult = i
                break
        out.append(RootInterval(a, b, mult))
    return out


def real_roots(p: Polynomial, lo=-math.inf, hi=math.inf, tol: float = 1e-13) -> list[float]:
    """Refined distinct real roots in (lo, hi] as floats (interval midpoints)."""
    return [r.mid for r in isolate_and_refine(p, lo, hi, tol)]


def polynomial_dumps(p: Polynomial) -> str:
    return json.dumps(p.to_json())


def polynomial_loads(s: str) -> Polynomial:
    return Polynomial.from_json(s)



def _det(rows: list[list]) -> Fraction:
    """Exact determinant by fraction-preserving Gaussian elimination."""
    m = [[_coerce(c) for c in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        p = m[col][col]
        det *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def resultant(p: Polynomial, q: Polynomial) -> Fraction:
    """Sylvester resultant; zero iff p and q share a complex root."""
    m, n = p.degree, q.degree
    if m < 0 or n < 0:
        return Fraction(0)
    if m == 0 or n == 0:
        return Fraction(p.lc) ** n * Fraction(q.lc) ** m
    size = m + n
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([0] * i + pc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + qc + [0] * (size - n - 1 - i))
    return _det(rows)


def discriminant(p: Polynomial) -> Fraction:
    """Res(p, p') / lc(p), with the usual sign (-1)^(n(n-1)/2)."""
    n = p.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(p, p.derivative()) / p.lc


def interpolate(xs, ys) -> Polynomial:
    """Exact interpolating polynomial through (xs[i], ys[i]) (Newton form)."""
    xs = [_coerce(x) for x in xs]
    coef = [_coerce(y) for y in ys]
    n = len(xs)
    if len(set(xs)) != n or len(coef) != n:
        raise ValueError("interpolation needs distinct nodes and matching values")
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = Polynomial([coef[-1]])
    for i in range(n - 2, -1, -1):
        out = out * Polynomial([-xs[i], 1]) + Polynomial([coef[i]])
    return out
