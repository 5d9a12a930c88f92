"""Translation-invariant fixed points of W and their counting.

Case 1 works on I1 (one scalar z), Case 2 on I2 (a pair z1, z2 written as
u_i = sqrt(z_i) for k = 2).  Counting is exact: parameters are rationalized and
the scalar equations are handed to the Sturm machinery in ``polyroot``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .boundary_law import BoundaryField, is_fixed_point
from .isingpotts_model import ModelParams
from .polyroot import (
    Polynomial,
    QuadSurd,
    count_roots,
    discriminant,
    gcd,
    interpolate,
    isolate_and_refine,
    real_roots,
    resultant,
    to_fraction,
)

SOURCES = ("trivial", "linear_D", "quadratic", "quartic", "case1_cubic")
FIXED_POINT_TOL = 1e-9
BOUNDARY_RTOL = 1e-12


class SingularBranch(ZeroDivisionError):
    """The back-substitution for u2**2 has a vanishing denominator."""

    def __init__(self, msg: str, numerator: float):
        super().__init__(msg)
        self.numerator = numerator


class DegenerateCase(ValueError):
    """a = 1: the Case-2 quartic is identically zero and I2 collapses onto I1."""


def _frac(x) -> Fraction:
    return to_fraction(x)


# ----------------------------------------------------------------------------
# Result containers


@dataclass
class TigmSolution:
    coordinates: tuple[float, ...]
    source: str
    u: tuple[float, ...] | None = None
    residual: float = math.nan
    fixed_point_residual: float = math.nan
    valid: bool = False
    note: str = ""

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source tag {self.source!r}")

    def to_dict(self) -> dict:
        d = {"source": self.source}
        if len(self.coordinates) == 1:
            d["z"] = self.coordinates[0]
        else:
            d["z1"], d["z2"] = self.coordinates
        if self.u is not None:
            d["u"] = list(self.u)
        d["residual"] = self.residual
        d["fixed_point_residual"] = self.fixed_point_residual
        d["valid"] = self.valid
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class PhaseClassification:
    point: dict
    regime: str
    count: int
    validated_count: int
    thresholds: list[float] = field(default_factory=list)
    solutions: list[TigmSolution] = field(default_factory=list)
    case: str = "case1"
    flags: list[str] = field(default_factory=list)

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 0:
            raise ValueError("count must be a nonnegative integer")
        self.thresholds = sorted(float(t) for t in self.thresholds)

    def to_dict(self) -> dict:
        return {
            "point": self.point,
            "case": self.case,
            "regime": self.regime,
            "count": self.count,
            "validated_count": self.validated_count,
            "thresholds": self.thresholds,
            "flags": self.flags,
            "solutions": [s.to_dict() for s in self.solutions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


# ----------------------------------------------------------------------------
# Case 1


@dataclass(frozen=True)
class Case1Reduction:
    """Ax = ((1+x)/(B+x))**k with x = z*scale."""

    A: Fraction
    B: Fraction
    scale: Fraction
    k: int

    def z_of(self, x) -> float:
        return float(x) / float(self.scale)

    def x_of(self, z) -> float:
        return float(z) * float(self.scale)

    def polynomial(self, A=None) -> Polynomial:
        """A x (B+x)^k - (1+x)^k; ``A`` may be overridden (e.g. by a QuadSurd)."""
        A = self.A if A is None else A
        lhs = Polynomial([0, 1]) * Polynomial([self.B, 1]) ** self.k
        lhs = Polynomial([c * A for c in lhs.coeffs])
        return lhs - Polynomial([1, 1]) ** self.k


def case1_reduce(params: ModelParams) -> Case1Reduction:
    q, k = params.q, params.k
    b = _frac(params.b)
    s = b + q - 2
    return Case1Reduction(A=Fraction(q - 1) ** k / s ** (k + 1),
                          B=b * s / (q - 1), scale=s, k=k)


def theta_c(k: int, q: int, alpha: float) -> float:
    """Value of theta_P above which the I1 equation admits several roots for some A."""
    if k < 2:
        raise ValueError("theta_c is undefined for k = 1")
    if not 0 <= alpha < 1:
        raise ValueError("theta_c needs alpha in [0, 1)")
    m = k - 1
    base = (math.sqrt((q - 2) ** 2 * m**2 + 4 * (q - 1) * (k + 1) ** 2) - (q - 2) * m) / (2 * m)
    return base ** (1.0 / (1.0 - alpha))


def b_c(k: int, q: int) -> float:
    return theta_c(k, q, 0.0)


@dataclass(frozen=True)
class EtaBounds:
    eta1: float
    eta2: float
    x1: float
    x2: float
    exact: tuple | None = None  # (eta1, eta2, x1, x2) as QuadSurd when B is rational


def _tangency_quadratic(B, k):
    # x^2 + [2 - (B-1)(k-1)] x + B
    p = 2 - (B - 1) * (k - 1)
    return p, p * p - 4 * B


def eta_bounds(B, k: int) -> EtaBounds | None:
    """Interval (eta1, eta2) of A giving three positive solutions, or None.

    x1, x2 are the tangency points; each eta is evaluated there.  With a
    rational B the values are also kept exactly in Q(sqrt(disc)).
    """
    if k < 2:
        return None
    Bf = _frac(B)
    p, disc = _tangency_quadratic(Bf, k)
    if disc <= 0 or p >= 0:
        return None

    def eta(x):
        return ((1 + x) / (Bf + x)) ** k / x

    exact = None
    root = _rational_sqrt(disc)
    if root is not None:
        xs = [(-p - root) / 2, (-p + root) / 2]
        etas = [eta(x) for x in xs]
    else:
        xs = [QuadSurd(-p / 2, Fraction(-1, 2), disc), QuadSurd(-p / 2, Fraction(1, 2), disc)]
        etas = [eta(x) for x in xs]
    pairs = sorted(zip(etas, xs), key=lambda t: float(t[0]))
    exact = (pairs[0][0], pairs[1][0], pairs[0][1], pairs[1][1])
    return EtaBounds(float(exact[0]), float(exact[1]), float(exact[2]), float(exact[3]), exact)


def _rational_sqrt(x: Fraction) -> Fraction | None:
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def tangency_gcd(red: Case1Reduction, which: int) -> Polynomial:
    """gcd(P, P') of the x-polynomial at A = eta_which, in exact arithmetic."""
    eb = eta_bounds(red.B, red.k)
    if eb is None:
        raise ValueError("no tangency: B is in the uniqueness regime")
    A = eb.exact[which - 1]
    P = red.polynomial(A)
    return gcd(P, P.derivative())


def case1_polynomial(params: ModelParams) -> Polynomial:
    """z (z(q-1)+b)^k - (z(b+q-2)+1)^k with b rationalized."""
    q, k = params.q, params.k
    b = _frac(params.b)
    z = Polynomial([0, 1])
    return z * Polynomial([b, q - 1]) ** k - Polynomial([1, b + q - 2]) ** k


def solve_case1(params: ModelParams, tol: float = 1e-13) -> list[float]:
    """All positive I1 roots, ascending.  z = 1 is always among them."""
    roots = real_roots(case1_polynomial(params), 0, math.inf, tol)
    return [1.0 if abs(r - 1) <= 4 * tol else r for r in roots]


def solve_case1_k2(params: ModelParams, boundary_rtol: float = 0.0) -> list[float]:
    """Closed-form roots for k = 2: z0 = 1 and, when Delta >= 0, the pair
    [(b-1)^2 - 2(q-1) +- |b-1| sqrt(Delta)] / (2(q-1)^2)."""
    if params.k != 2:
        raise ValueError("closed form needs k = 2")
    q, b = params.q, params.b
    delta = (b - 1) ** 2 - 4 * (q - 1)
    if abs(delta) <= boundary_rtol * 4 * abs(b - 1) * max(b, 1.0):
        delta = 0.0
    out = [1.0]
    if delta >= 0:
        c = (b - 1) ** 2 - 2 * (q - 1)
        s = abs(b - 1) * math.sqrt(delta)
        den = 2 * (q - 1) ** 2
        out += [(c - s) / den, (c + s) / den]
    uniq: list[float] = []
    for z in sorted(out):
        if not uniq or abs(z - uniq[-1]) > 1e-12 * max(1.0, z):
            uniq.append(z)
    return uniq


def case1_k2_threshold(q: int, alpha: float) -> float:
    """theta_P threshold (1 + 2 sqrt(q-1))**(1/(1-alpha)) for k = 2."""
    if not 0 <= alpha < 1:
        raise ValueError("threshold needs alpha in [0, 1)")
    return (1 + 2 * math.sqrt(q - 1)) ** (1.0 / (1.0 - alpha))


def _case1_solution(params: ModelParams, z: float) -> TigmSolution:
    ok, res = is_fixed_point(params, BoundaryField.from_I1(params.q, z), FIXED_POINT_TOL)
    poly = (z * (z * (params.q - 1) + params.b) ** params.k
            - (z * (params.b + params.q - 2) + 1) ** params.k)
    scale = (z * (params.b + params.q - 2) + 1) ** params.k
    return TigmSolution((z,), "trivial" if z == 1.0 else "case1_cubic",
                        residual=abs(poly) / max(scale, 1.0), fixed_point_residual=res, valid=ok)


def classify_case1(params: ModelParams, boundary_rtol: float = BOUNDARY_RTOL) -> PhaseClassification:
    """Number of I1 fixed points.

    For k = 2 the count follows the sign of b - (1 + 2 sqrt(q-1)), decided
    exactly; points within ``boundary_rtol`` of the threshold count as the
    double-root case and are flagged.  For other k: unique when k = 1 or
    theta_P <= theta_c, otherwise the number of positive polynomial roots.
    """
    q, k, alpha = params.q, params.k, params.alpha
    point = params.to_dict()
    flags: list[str] = []
    if params.b == 1.0:
        sols = [_case1_solution(params, 1.0)]
        return PhaseClassification(point, "unique", 1, sum(s.valid for s in sols), [], sols,
                                   "case1", ["no_interaction" if alpha < 1 else "ising_limit"])
    if k == 2:
        thr = case1_k2_threshold(q, alpha) if alpha < 1 else math.inf
        bstar = QuadSurd(1, 2, q - 1)
        diff = (QuadSurd(_frac(params.b), 0, q - 1) - bstar)
        near = abs(params.b - float(bstar)) <= boundary_rtol * float(bstar)
        if near:
            flags.append("boundary-uncertain")
            count, regime = 2, "boundary"
        elif diff.sign() > 0:
            count, regime = 3, "multiple"
        else:
            count, regime = 1, "unique"
        zs = solve_case1_k2(params, boundary_rtol if near else 0.0)
        if _frac(params.b) == q + 1:
            # one nontrivial root lands on z = 1
            flags.append("coincidence: nontrivial root equals z = 1")
        sols = [_case1_solution(params, z) for z in zs]
        return PhaseClassification(point, regime, count, sum(s.valid for s in sols),
                                   [thr] if math.isfinite(thr) else [], sols, "case1", flags)

    zs = solve_case1(params)
    sols = [_case1_solution(params, z) for z in zs]
    validated = sum(s.valid for s in sols)
    if k == 1 or alpha == 1:
        return PhaseClassification(point, "unique", 1, validated, [], sols, "case1", flags)
    tc = theta_c(k, q, alpha)
    if params.theta_P <= tc:
        return PhaseClassification(point, "unique", 1, validated, [tc], sols, "case1", flags)
    red = case1_reduce(params)
    eb = eta_bounds(red.B, k)
    if eb is not None:
        A = float(red.A)
        flags.append("A in (eta1, eta2)" if eb.eta1 < A < eb.eta2 else "A outside (eta1, eta2)")
    regime = "multiple" if len(zs) > 1 else "unique"
    return PhaseClassification(point, regime, len(zs), validated, [tc], sols, "case1", flags)


# ----------------------------------------------------------------------------
# Case 2


def case2_u2_squared(u1, a, b, q):
    """u2**2 from the first I2 equation; raises SingularBranch on a zero denominator."""
    num = -(q - 1) * u1**3 + a**2 * (q + b - 2) * u1**2 - b * (a**2 + 1) * u1 + a**2 + 1
    den = a**2 * (q - 1) * u1 - (q + b - 2)
    exact = all(isinstance(v, (int, Fraction)) for v in (u1, a, b))
    if den == 0 or (not exact and abs(den) <= 1e-13 * (a**2 * (q - 1) * abs(u1) + q + b)):
        raise SingularBranch("denominator a^2(q-1)u1 - (q+b-2) vanishes", float(num))
    return num / den


@dataclass(frozen=True)
class Case2Quartic:
    """Quartic factor A1 u^4 + B1 u^3 + C1 u^2 + D1 u + E1 of the I2 eliminant."""

    a: Fraction
    b: Fraction
    q: int
    A1: Fraction
    B1: Fraction
    C1: Fraction
    D1: Fraction
    E1: Fraction

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial([self.E1, self.D1, self.C1, self.B1, self.A1])


def case2_quartic(a, b, q: int) -> Case2Quartic:
    """Coefficients of the quartic factor, exact for rational a, b.

    D1 carries a single factor (a^2 - 1); with it the product of all factors
    is, up to the constant -(a^2+1)^2 and the squared linear factor, the exact
    eliminant of the two I2 equations after squaring.
    """
    a, b = _frac(a), _frac(b)
    s = b + q - 2
    m = a * a - 1
    A1 = -(q - 1) ** 2 * s**2 * m**2
    B1 = (q - 1) * s**3 * m**3
    C1 = -s * m * (m * b**3 + ((q - 1) * a**4 + (2 * q - 5) * a**2 - 5 * q + 8) * b**2
                   + ((q * q - 3 * q + 2) * a**4 + (2 * q * q - 9 * q + 10) * a**2
                      - 5 * q * q + 18 * q - 16) * b
                   + (q**3 - 4 * q * q + 8 * q - 6) * a**2 - q**3 + 6 * q * q - 12 * q + 8)
    D1 = s**2 * m * ((a**2 + 1) * b**2 + (q - 2) * (a**2 + 1) * b + a**2 * (a**2 - 3) * (q - 1))
    E1 = (-(a**2 + 1) * b**4 + (-a**4 + (-2 * q + 6) * a**2 - 2 * q + 3) * b**3
          + ((-q + 4) * a**4 + (-q * q + 12 * q - 18) * a**2 - q * q + q + 2) * b**2
          - (q - 2) * ((q - 4) * a**4 - 2 * (4 * q - 7) * a**2 + 3 * (q - 2)) * b
          - (q - 1) ** 2 * a**6 + (-q**3 + 5 * q * q - 10 * q + 7) * a**4
          + 2 * (q - 2) ** 3 * a**2 - (q - 2) ** 3)
    return Case2Quartic(a, b, q, A1, B1, C1, D1, E1)


def case2_linear_root(a, b, q: int) -> Fraction:
    a, b = _frac(a), _frac(b)
    return (b + q - 2) / (a * a * (q - 1))


def case2_factors(a, b, q: int) -> list[Polynomial]:
    """[u - 1, (a^2(q-1)u - (b+q-2))^2, -(q-1)u^2 + (b-1)u - 1, quartic]."""
    a, b = _frac(a), _frac(b)
    if a == 1:
        raise DegenerateCase("a = 1: the quartic factor vanishes identically")
    lin = Polynomial([-(b + q - 2), a * a * (q - 1)])
    quad = Polynomial([-1, b - 1, -(q - 1)])
    return [Polynomial([-1, 1]), lin * lin, quad, case2_quartic(a, b, q).polynomial]


def quartic_q3_equal(a, variant: str = "eliminant") -> Polynomial:
    """The q = 3, b = a quartic with the common (a-1)^2 divided out.

    ``variant="eliminant"`` (default) has constant term -((a+1)^5 + a^4 + a^2);
    it is the one for which (a-1)^2 times it equals the general quartic at
    b = a, q = 3.  ``variant="display"`` keeps the constant -((a+1)^5 + a^2)
    found in the published display, kept for comparison.
    """
    a = _frac(a)
    if variant == "eliminant":
        c0 = -((a + 1) ** 5 + a**4 + a**2)
    elif variant == "display":
        c0 = -((a + 1) ** 5 + a**2)
    else:
        raise ValueError("variant must be 'eliminant' or 'display'")
    return Polynomial([
        c0,
        a * (3 * a * a + 4 * a - 1) * (a + 1) ** 3,
        -(a + 1) ** 2 * (2 * a**5 + 5 * a**4 + 6 * a**3 + 6 * a**2 + 8 * a + 1),
        2 * (a - 1) * (a + 1) ** 6,
        -4 * (a + 1) ** 4,
    ])


def count_quartic_positive_roots(a, variant: str = "eliminant") -> int:
    """Distinct positive roots of ``quartic_q3_equal(a)`` by a Sturm count on (0, inf)."""
    if _frac(a) <= 0:
        raise ValueError("a must be positive")
    return count_roots(quartic_q3_equal(a, variant), 0, math.inf)


# Sign anchors of the Sturm chain of the q = 3, b = a quartic.
G1 = Polynomial([-32, -159, -352, -334, -224, -52, 16, 30, 16, 3])
G2 = Polynomial([-5, -52, -36, -60, -70, -28, 12, 12, 3])


def sturm_p2(a, variant: str = "eliminant") -> Polynomial:
    """Third Sturm polynomial of the q = 3, b = a quartic, in closed form."""
    E, D, C, B, A = quartic_q3_equal(a, variant).coeffs
    return Polynomial([B * D / (16 * A) - E, B * C / (8 * A) - Fraction(3, 4) * D,
                       3 * B * B / (16 * A) - C / 2])


def sturm_p3(a, variant: str = "eliminant") -> Polynomial:
    E, D, C, B, A = quartic_q3_equal(a, variant).coeffs
    f = 16 * A / (8 * A * C - 3 * B * B) ** 2
    c1 = (2 * B**2 * C**2 - 8 * A * C**3 - 6 * B**3 * D + 28 * A * B * C * D
          - 36 * A**2 * D**2 - 12 * A * B**2 * E + 32 * A**2 * C * E)
    c0 = (B**2 * C * D - 4 * A * C**2 * D + 3 * A * B * D**2 - 9 * B**3 * E
          + 32 * A * B * C * E - 48 * A**2 * D * E)
    return Polynomial([f * c0, f * c1])


def _embed_I2(params: ModelParams, z1: float, z2: float) -> tuple[bool, float]:
    return is_fixed_point(params, BoundaryField.from_I2(params.q, z1, z2), FIXED_POINT_TOL)


def case2_residuals(u1: float, u2: float, a: float, b: float, q: int) -> tuple[float, float]:
    """Relative residuals of the two I2 equations in u-coordinates."""
    lhs_common = (u1 * u1 / a + a * u2 * u2) * (q - 1) + b * (a + 1 / a)
    r1 = (a * u1 * u1 + u2 * u2 / a) * (q + b - 2) + a + 1 / a
    r2 = (u1 * u1 / a + a * u2 * u2) * (q + b - 2) + a + 1 / a
    e1 = abs(u1 * lhs_common - r1) / max(1.0, abs(r1))
    e2 = abs(u2 * lhs_common - r2) / max(1.0, abs(r2))
    return e1, e2


def validate_case2_solution(params: ModelParams, u1: float, source: str = "quartic",
                            dedup_tol: float = 1e-9) -> TigmSolution:
    """Back-substitute u1, check both I2 equations and the fixed-point property."""
    a, b, q = params.a, params.b, params.q
    if u1 <= 0:
        return TigmSolution((math.nan, math.nan), source, (u1, math.nan), note="u1 must be positive")
    try:
        u2sq = case2_u2_squared(float(u1), a, b, q)
    except SingularBranch as exc:
        return TigmSolution((u1 * u1, math.nan), source, (u1, math.nan),
                            note=f"singular branch; first-equation numerator {exc.numerator:.6g}")
    if not u2sq > 0:
        return TigmSolution((u1 * u1, u2sq), source, (u1, math.nan),
                            note=f"u2^2 = {u2sq:.6g} is not positive")
    u2 = math.sqrt(u2sq)
    e1, e2 = case2_residuals(u1, u2, a, b, q)
    ok_fp, fp_res = _embed_I2(params, u1 * u1, u2sq)
    res = max(e1, e2)
    valid = res <= FIXED_POINT_TOL and ok_fp
    note = "" if valid else ("system residual too large" if res > FIXED_POINT_TOL
                             else "solves the I2 equations but not W(z) = z")
    return TigmSolution((u1 * u1, u2sq), source, (u1, u2), res, fp_res, valid, note)


def _case2_candidates(a, b, q: int, tol: float = 1e-13) -> list[tuple[float, str]]:
    fac = case2_factors(a, b, q)
    out = [(1.0, "trivial"), (float(case2_linear_root(a, b, q)), "linear_D")]
    for r in isolate_and_refine(fac[2], 0, math.inf, tol):
        out.append((r.mid, "quadratic"))
    for r in isolate_and_refine(fac[3], 0, math.inf, tol):
        out.append((r.mid, "quartic"))
    return out


def _dedup(cands: Iterable[tuple[float, str]], rtol: float) -> list[tuple[float, str]]:
    order = {s: i for i, s in enumerate(SOURCES)}
    out: list[tuple[float, str]] = []
    for v, s in sorted(cands):
        if out and abs(v - out[-1][0]) <= rtol * max(abs(v), abs(out[-1][0])):
            if order[s] < order[out[-1][1]]:
                out[-1] = (out[-1][0], s)
            continue
        out.append((v, s))
    return out


def count_case2(a, b=None, q: int = 3, dedup_tol: float = 1e-9) -> int:
    """Distinct positive roots of the four-factor product (no validation)."""
    b = a if b is None else b
    return len(_dedup(_case2_candidates(a, b, q), dedup_tol))


def solve_case2(params: ModelParams, dedup_tol: float = 1e-9) -> list[TigmSolution]:
    """Every distinct positive root of the product, with its validation record.

    The u-coordinates of the I2 system are square roots of z, so k must be 2.
    """
    if params.k != 2:
        raise ValueError("the I2 system in u-coordinates needs k = 2")
    a, b = _frac(params.a), _frac(params.b)
    return [validate_case2_solution(params, u, s, dedup_tol)
            for u, s in _dedup(_case2_candidates(a, b, params.q), dedup_tol)]


# Critical polynomials in a along the line b = a, q = 3.  Every change in the
# root count happens at a positive root of one of them.

def _case2_line(a: Fraction):
    fac = case2_factors(a, a, 3)
    return fac[2], quartic_q3_equal(a)


def _interp(fn: Callable[[Fraction], Fraction], degree: int) -> Polynomial:
    xs = [Fraction(i + 2, 1) if i % 2 == 0 else Fraction(2 * i + 5, 2) for i in range(degree + 2)]
    p = interpolate(xs, [fn(x) for x in xs])
    chk = Fraction(31, 7)
    if p(chk) != fn(chk):
        raise AssertionError("interpolation degree too low")
    return p


@lru_cache(maxsize=None)
def case2_critical_polynomials() -> dict[str, Polynomial]:
    def quartic_disc(a):
        return discriminant(quartic_q3_equal(a))

    def quartic_quad(a):
        quad, quart = _case2_line(a)
        return resultant(quart, quad)

    def quartic_at(u_of):
        return lambda a: quartic_q3_equal(a)(u_of(a)) * (2 * a * a) ** 4

    def quad_at_linear(a):
        quad, _ = _case2_line(a)
        return quad(case2_linear_root(a, a, 3)) * (2 * a * a) ** 2

    return {
        "quartic_discriminant": _interp(quartic_disc, 44),
        "quartic_quadratic_resultant": _interp(quartic_quad, 20),
        "quartic_at_one": _interp(lambda a: quartic_q3_equal(a)(1), 8),
        "quartic_at_linear_root": _interp(quartic_at(lambda a: case2_linear_root(a, a, 3)), 16),
        "quadratic_at_linear_root": _interp(quad_at_linear, 8),
        "quadratic_at_one": Polynomial([-4, 1]),
        "quadratic_discriminant": Polynomial([-7, -2, 1]),
    }


@lru_cache(maxsize=None)
def case2_critical_points(lo: float = 0.0, hi: float = 1e6) -> tuple[float, ...]:
    pts = set()
    for p in case2_critical_polynomials().values():
        for r in real_roots(p, lo, hi, 1e-15):
            if r > 0 and abs(r - 1) > 1e-12:
                pts.add(r)
    return tuple(sorted(pts))


@lru_cache(maxsize=None)
def case2_thresholds(dedup_tol: float = 1e-9) -> tuple[float, ...]:
    """Critical points where the b = a, q = 3 count actually changes."""
    cls = lambda a: count_case2(a, a, 3, dedup_tol)  # noqa: E731
    return tuple(t.point for t in scan_thresholds(cls, 1e-3, 1e3, candidates=case2_critical_points(),
                                                   steps=0))


def classify_case2_k2_q3(a, dedup_tol: float = 1e-9, validate: bool = True,
                         boundary_rtol: float = 1e-9) -> PhaseClassification:
    """Distinct positive roots of the I2 product at q = 3, k = 2, b = a."""
    af = float(a)
    if not af > 0:
        raise ValueError("a must be positive")
    if _frac(a) == 1:
        raise DegenerateCase("a = 1: I2 collapses onto I1; use classify_case1")
    cands = _dedup(_case2_candidates(_frac(a), _frac(a), 3), dedup_tol)
    count = len(cands)
    params = ModelParams.from_ab(3, 2, af, af, alpha=0.5)
    sols = [validate_case2_solution(params, u, s, dedup_tol) for u, s in cands] if validate else []
    flags = []
    crit = case2_critical_points()
    if any(abs(af - c) <= boundary_rtol * c for c in crit):
        flags.append("boundary")
    thr = list(case2_thresholds(dedup_tol))
    return PhaseClassification({"q": 3, "k": 2, "a": af, "b": af}, f"I2:{count}", count,
                               sum(s.valid for s in sols), thr, sols, "case2", flags)


# ----------------------------------------------------------------------------
# Threshold search


@dataclass(frozen=True)
class Threshold:
    point: float
    left: int
    at: int
    right: int
    kind: str  # "jump" or "isolated"


def scan_thresholds(classifier: Callable[[float], int], lo: float, hi: float,
                    tol: float = 1e-4, steps: int = 200,
                    candidates: Sequence[float] = ()) -> list[Threshold]:
    """Jumps of a piecewise-constant classifier on (lo, hi).

    A uniform grid of ``steps`` cells is scanned and each change is bisected
    to width ``tol``.  Points where the value differs only at the point itself
    cannot be seen by a grid; they are found by testing ``candidates`` (e.g.
    roots of critical polynomials) against both neighbours.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    found: list[Threshold] = []
    if steps:
        grid = [lo + (hi - lo) * i / steps for i in range(steps + 1)]
        vals = [classifier(x) for x in grid]
        for x0, x1, v0, v1 in zip(grid, grid[1:], vals, vals[1:]):
            if v0 == v1:
                continue
            l, r = x0, x1
            while r - l > tol:
                m = 0.5 * (l + r)
                vm = classifier(m)
                if vm == v0:
                    l = m
                elif vm == v1:
                    r = m
                else:  # a third value: narrow towards the first change
                    r, v1 = m, vm
            found.append(Threshold(0.5 * (l + r), v0, classifier(0.5 * (l + r)), v1, "jump"))
    cands = sorted(c for c in candidates if lo < c < hi)
    for i, c in enumerate(cands):
        gap = min([abs(c - d) for d in cands if d != c] + [tol * 10])
        h = min(tol, gap / 3, max(c * 1e-6, 1e-9))
        left, at, right = classifier(c - h), classifier(c), classifier(c + h)
        if left == at == right:
            continue
        kind = "isolated" if left == right else "jump"
        found = [t for t in found if abs(t.point - c) > 2 * tol]
        found.append(Threshold(c, left, at, right, kind))
    return sorted(found, key=lambda t: t.point)


def find_thresholds(classifier: Callable[[float], int], lo: float, hi: float,
                    tol: float = 1e-4, steps: int = 200,
                    candidates: Sequence[float] = ()) -> list[float]:
    """Sorted critical points of ``classifier`` on (lo, hi); see ``scan_thresholds``."""
    return [t.point for t in scan_thresholds(classifier, lo, hi, tol, steps, candidates)]
