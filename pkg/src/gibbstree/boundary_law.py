"""Boundary-law recursion: the operator W, its multi-child form, propagation
down finite trees, and plain fixed-point iteration."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .isingpotts_model import (
    CayleyTreeSlice,
    FieldAssignment,
    ModelParams,
    pair_log_weights,
)


class BoundaryField:
    """Positive vector z_{i,j}, i in {+1,-1}, j in 1..q, stored as a (2, q)
    array with row 0 = (i=+1).  The entry z_{-1,q} is pinned to 1."""

    __slots__ = ("z",)

    def __init__(self, z):
        arr = np.array(z, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != 2:
            raise ValueError(f"boundary field must have shape (2, q), got {arr.shape}")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise ValueError("boundary field entries must be finite and positive")
        if arr[1, -1] != 1.0:
            raise ValueError("entry z_{-1,q} must equal 1")
        arr.setflags(write=False)
        self.z = arr

    @property
    def q(self) -> int:
        return self.z.shape[1]

    @classmethod
    def normalized(cls, arr) -> "BoundaryField":
        arr = np.asarray(arr, dtype=float)
        return cls(arr / arr[1, -1])

    @classmethod
    def ones(cls, q: int) -> "BoundaryField":
        return cls(np.ones((2, q)))

    @classmethod
    def from_I1(cls, q: int, z: float) -> "BoundaryField":
        return cls.from_I2(q, z, z)

    @classmethod
    def from_I2(cls, q: int, z1: float, z2: float) -> "BoundaryField":
        arr = np.empty((2, q))
        arr[0, :] = z1
        arr[1, :] = z2
        arr[:, -1] = 1.0
        return cls(arr)

    @classmethod
    def from_log(cls, h) -> "BoundaryField":
        h = np.asarray(h, dtype=float)
        return cls(np.exp(h - h[1, -1]))

    def log(self) -> np.ndarray:
        return np.log(self.z)

    def entry(self, i: int, j: int) -> float:
        return float(self.z[0 if i == 1 else 1, j - 1])

    def flat(self) -> np.ndarray:
        return self.z.reshape(-1)

    def invariant_set(self, tol: float = 1e-12) -> tuple[str, object]:
        """('I1', z), ('I2', (z1, z2)) or ('general', None).

        Membership needs z_{1,q} = 1 and equal entries within each row's first
        q-1 positions, all up to relative ``tol``.
        """
        z = self.z
        if abs(z[0, -1] - 1.0) > tol:
            return "general", None
        r1, r2 = z[0, :-1], z[1, :-1]
        if _spread(r1) > tol or _spread(r2) > tol:
            return "general", None
        z1, z2 = float(r1.mean()), float(r2.mean())
        if abs(z1 - z2) <= tol * max(z1, z2):
            return "I1", z1
        return "I2", (z1, z2)

    def to_json(self) -> str:
        rows = []
        for r, i in enumerate((1, -1)):
            for j in range(1, self.q + 1):
                rows.append([i, j, float(self.z[r, j - 1])])
        return json.dumps({"z": rows})

    @classmethod
    def from_json(cls, s) -> "BoundaryField":
        data = json.loads(s) if isinstance(s, str) else s
        entries = data["z"]
        q = max(int(j) for _, j, _ in entries)
        arr = np.full((2, q), np.nan)
        for i, j, v in entries:
            if i not in (1, -1) or not 1 <= j <= q:
                raise ValueError(f"bad index ({i}, {j})")
            arr[0 if i == 1 else 1, j - 1] = v
        if np.isnan(arr).any():
            raise ValueError("boundary field JSON is missing entries")
        return cls(arr)

    def __eq__(self, other):
        return isinstance(other, BoundaryField) and np.array_equal(self.z, other.z)

    def __repr__(self):
        return f"BoundaryField({self.z.tolist()})"


def _spread(v: np.ndarray) -> float:
    if v.size == 0:
        return 0.0
    return float((v.max() - v.min()) / max(abs(v).max(), 1e-300))


def _check_q(params: ModelParams, f: BoundaryField):
    if f.q != params.q:
        raise ValueError(f"field has q={f.q}, model has q={params.q}")


def child_ratio(params: ModelParams, child: BoundaryField) -> np.ndarray:
    """Per-child factor of the recursion, as a (2, q) array.

    Entry (i, j) is sum_{u,v} exp(b*a*J_I*i*u + b*(1-a)*J_P*[j=v]) z_{u,v}
    divided by the same sum at (i, j) = (-1, q).
    """
    _check_q(params, child)
    K = np.exp(pair_log_weights(params))
    num = K @ child.flat()
    return (num / num[-1]).reshape(2, params.q)


def apply_W(params: ModelParams, field: BoundaryField) -> BoundaryField:
    """Translation-invariant step: k identical children."""
    out = child_ratio(params, field) ** params.k
    out[1, -1] = 1.0
    return BoundaryField(out)


def apply_W_compact(params: ModelParams, field: BoundaryField) -> BoundaryField:
    """Same map written with a = theta_I**alpha, b = theta_P**(1-alpha)."""
    _check_q(params, field)
    a, b, q = params.a, params.b, params.q
    z = field.z
    z1, zm = z[0], z[1]
    den = np.sum(z1[:-1] / a + a * zm[:-1]) + b * (z1[-1] / a + a)
    out = np.empty((2, q))
    for r, i in enumerate((1, -1)):
        ai = a**i
        tot = np.sum(ai * z1 + zm / ai)
        out[r] = ((tot + (b - 1) * (ai * z1 + zm / ai)) / den) ** params.k
    out[1, -1] = 1.0
    return BoundaryField(out)


def apply_W_multi(params: ModelParams, child_fields: Sequence[BoundaryField]) -> BoundaryField:
    """Product over successors of the per-child factors."""
    if not child_fields:
        raise ValueError("need at least one child field")
    out = np.ones((2, params.q))
    for c in child_fields:
        out *= child_ratio(params, c)
    out[1, -1] = 1.0
    return BoundaryField(out)


def propagate_fields(params: ModelParams, slice: CayleyTreeSlice,
                     boundary: Mapping[int, BoundaryField]) -> dict[int, BoundaryField]:
    """Fields on every vertex of the slice, computed leaf-to-root from the
    fields on its deepest generation."""
    out: dict[int, BoundaryField] = {}
    for v in slice.level(slice.n):
        if v not in boundary:
            raise KeyError(f"missing leaf field on vertex {v}")
        out[v] = boundary[v]
    for v in reversed(range(slice.ball_size(slice.n - 1))):
        out[v] = apply_W_multi(params, [out[y] for y in slice.children[v]])
    return out


def to_field_assignment(fields: Mapping[int, BoundaryField]) -> FieldAssignment:
    return FieldAssignment({v: f.log() for v, f in fields.items()})


def translation_invariant_fields(slice: CayleyTreeSlice, z: BoundaryField) -> FieldAssignment:
    """The same log-field log z on every vertex."""
    h = z.log()
    return FieldAssignment({v: h for v in range(slice.n_vertices)})


@dataclass
class IterationResult:
    limit: BoundaryField | None
    converged: bool
    iterations: int
    distance: float
    diverged: bool = False
    invariant_set: str | None = None
    message: str = ""


def project_I1(z: BoundaryField) -> BoundaryField:
    """Nearest I1 point (geometric mean of the free entries)."""
    free = np.concatenate([z.z[0, :-1], z.z[1, :-1]])
    return BoundaryField.from_I1(z.q, float(np.exp(np.mean(np.log(free)))))


def iterate_W(params: ModelParams, z0, max_iter: int = 100_000,
              tol: float = 1e-12, restrict: str | None = None) -> IterationResult:
    """Iterate z <- W(z) until the sup-norm step in log coordinates is below tol.

    ``restrict="I1"`` re-projects onto I1 after every step.  W maps I1 into
    itself, so this only strips round-off, which otherwise grows along
    directions transverse to I1 at fixed points that are stable only inside it.
    """
    if restrict not in (None, "I1"):
        raise ValueError("restrict must be None or 'I1'")
    z = z0 if isinstance(z0, BoundaryField) else BoundaryField(z0)
    if restrict:
        z = project_I1(z)
    dist = math.inf
    for it in range(max_iter + 1):
        try:
            with np.errstate(over="raise", invalid="raise", divide="raise"):
                nxt = apply_W(params, z)
            if restrict:
                nxt = project_I1(nxt)
        except (FloatingPointError, ValueError) as exc:
            return IterationResult(None, False, it, dist, diverged=True,
                                   message=f"overflow at iteration {it}: {exc}")
        dist = float(np.max(np.abs(np.log(nxt.z) - np.log(z.z))))
        if dist < tol:
            tag = z.invariant_set(max(tol * 1e3, 1e-10))[0]
            return IterationResult(z, True, it, dist, invariant_set=tag)
        if it < max_iter:
            z = nxt
    return IterationResult(z, False, max_iter, dist, message="max_iter reached")


def is_fixed_point(params: ModelParams, z: BoundaryField, tol: float = 1e-10) -> tuple[bool, float]:
    res = float(np.max(np.abs(apply_W(params, z).z - z.z)))
    return res <= tol, res
