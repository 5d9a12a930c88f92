"""(2,q)-Ising-Potts model on finite Cayley-tree balls.

Single-site states are encoded as integers t in [0, 2q): t < q is
(sigma=+1, s=t+1) and t >= q is (sigma=-1, s=t-q+1).  This is the row-major
flattening of a (2, q) array whose row 0 is sigma=+1, the same layout used by
boundary fields.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np
from scipy.special import logsumexp

# exhaustive enumeration is capped at 6**8 configurations
MAX_ENUMERATION = 6**8


class SizeLimitError(RuntimeError):
    """Raised when an exhaustive sum would exceed MAX_ENUMERATION terms."""


class MissingFieldError(KeyError):
    pass


@dataclass(frozen=True)
class ModelParams:
    q: int
    k: int
    alpha: float
    beta: float = 1.0
    J_I: float = 0.0
    J_P: float = 0.0
    # exact weights when the point was given as (theta or a/b) values
    _a: float | None = field(default=None, repr=False, compare=False)
    _b: float | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if int(self.q) != self.q or self.q < 3:
            raise ValueError(f"q must be an integer >= 3, got {self.q}")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be an integer >= 1, got {self.k}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        for name in ("J_I", "J_P"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        object.__setattr__(self, "q", int(self.q))
        object.__setattr__(self, "k", int(self.k))

    @classmethod
    def from_thetas(cls, q: int, k: int, alpha: float, theta_I: float = 1.0,
                    theta_P: float = 1.0, beta: float = 1.0) -> "ModelParams":
        if theta_I <= 0 or theta_P <= 0:
            raise ValueError("theta_I and theta_P must be positive")
        return cls(q, k, alpha, beta, math.log(theta_I) / beta, math.log(theta_P) / beta,
                   _a=theta_I**alpha, _b=theta_P ** (1 - alpha))

    @classmethod
    def from_ab(cls, q: int, k: int, a: float, b: float, alpha: float = 0.5,
                beta: float = 1.0) -> "ModelParams":
        """Point with prescribed a = theta_I**alpha and b = theta_P**(1-alpha)."""
        if a <= 0 or b <= 0:
            raise ValueError("a and b must be positive")
        if alpha == 0 and a != 1:
            raise ValueError("alpha = 0 forces a = 1")
        if alpha == 1 and b != 1:
            raise ValueError("alpha = 1 forces b = 1")
        J_I = math.log(a) / (beta * alpha) if alpha > 0 else 0.0
        J_P = math.log(b) / (beta * (1 - alpha)) if alpha < 1 else 0.0
        return cls(q, k, alpha, beta, J_I, J_P, _a=a, _b=b)

    @property
    def theta_I(self) -> float:
        return math.exp(self.beta * self.J_I)

    @property
    def theta_P(self) -> float:
        return math.exp(self.beta * self.J_P)

    @property
    def log_a(self) -> float:
        return self.beta * self.alpha * self.J_I

    @property
    def log_b(self) -> float:
        return self.beta * (1 - self.alpha) * self.J_P

    @property
    def a(self) -> float:
        return self._a if self._a is not None else math.exp(self.log_a)

    @property
    def b(self) -> float:
        return self._b if self._b is not None else math.exp(self.log_b)

    def with_k(self, k: int) -> "ModelParams":
        return replace(self, k=k)

    def to_dict(self) -> dict:
        return {"q": self.q, "k": self.k, "alpha": self.alpha, "beta": self.beta,
                "J_I": self.J_I, "J_P": self.J_P}

    @classmethod
    def from_dict(cls, d: Mapping) -> "ModelParams":
        missing = {"q", "k", "alpha"} - set(d)
        if missing:
            raise ValueError(f"missing parameter fields: {sorted(missing)}")
        return cls(int(d["q"]), int(d["k"]), float(d["alpha"]), float(d.get("beta", 1.0)),
                   float(d.get("J_I", 0.0)), float(d.get("J_P", 0.0)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> "ModelParams":
        return cls.from_dict(json.loads(s))


def special_case(kind: str, params: ModelParams) -> ModelParams:
    """Pure Ising (alpha=1) or pure Potts (alpha=0) version of ``params``."""
    if kind == "ising":
        return ModelParams(params.q, params.k, 1.0, params.beta, params.J_I, params.J_P)
    if kind == "potts":
        return ModelParams(params.q, params.k, 0.0, params.beta, params.J_I, params.J_P)
    raise ValueError(f"kind must be 'ising' or 'potts', got {kind!r}")


def pair_log_weights(params: ModelParams) -> np.ndarray:
    """(2q, 2q) table of beta*alpha*J_I*sigma*sigma' + beta*(1-alpha)*J_P*delta(s, s')."""
    q = params.q
    sigma = np.repeat([1, -1], q)
    s = np.tile(np.arange(q), 2)
    return (params.log_a * np.outer(sigma, sigma)
            + params.log_b * (s[:, None] == s[None, :]))


def state_index(sigma: int, s: int, q: int) -> int:
    if sigma not in (1, -1) or not 1 <= s <= q:
        raise ValueError(f"invalid spin ({sigma}, {s}) for q={q}")
    return (s - 1) if sigma == 1 else q + s - 1


def state_pair(t: int, q: int) -> tuple[int, int]:
    return (1, t + 1) if t < q else (-1, t - q + 1)


@dataclass(frozen=True)
class CayleyTreeSlice:
    """Ball V_n of radius n around the root, vertices numbered in BFS order."""

    k: int
    n: int
    parent: tuple[int, ...]
    generation: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]

    @property
    def n_vertices(self) -> int:
        return len(self.parent)

    def level(self, m: int) -> tuple[int, ...]:
        """Vertices of W_m (contiguous in BFS order)."""
        return tuple(v for v, g in enumerate(self.generation) if g == m)

    def ball_size(self, m: int) -> int:
        return sum(1 for g in self.generation if g <= m)

    def edges(self, upto: int | None = None) -> list[tuple[int, int]]:
        """Edges (parent, child) of L_m, m = upto (default n)."""
        m = self.n if upto is None else upto
        return [(p, v) for v, p in enumerate(self.parent) if p >= 0 and self.generation[v] <= m]


def build_slice(k: int, n: int, full_root: bool = True) -> CayleyTreeSlice:
    """Cayley tree ball of radius n.  The root has k+1 children (k if not full_root)."""
    if int(k) != k or k < 1:
        raise ValueError("k must be a positive integer")
    if int(n) != n or n < 0:
        raise ValueError("n must be a non-negative integer")
    parent = [-1]
    generation = [0]
    children: list[list[int]] = [[]]
    frontier = [0]
    for m in range(1, n + 1):
        nxt = []
        for x in frontier:
            deg = k + 1 if (x == 0 and full_root) else k
            for _ in range(deg):
                v = len(parent)
                parent.append(x)
                generation.append(m)
                children.append([])
                children[x].append(v)
                nxt.append(v)
        frontier = nxt
    return CayleyTreeSlice(k, n, tuple(parent), tuple(generation),
                           tuple(tuple(c) for c in children))


@dataclass(frozen=True)
class Configuration:
    """Spin pair (sigma, s) on every vertex of a slice."""

    spins: tuple[tuple[int, int], ...]

    @classmethod
    def from_states(cls, states: Sequence[int], q: int) -> "Configuration":
        return cls(tuple(state_pair(int(t), q) for t in states))

    @classmethod
    def constant(cls, n_vertices: int, sigma: int = 1, s: int = 1) -> "Configuration":
        return cls(((sigma, s),) * n_vertices)

    def states(self, q: int) -> np.ndarray:
        return np.array([state_index(sg, s, q) for sg, s in self.spins], dtype=np.int64)


@dataclass
class FieldAssignment:
    """Per-vertex log-scale boundary fields h, each a (2, q) array."""

    h: dict[int, np.ndarray]

    def on(self, v: int) -> np.ndarray:
        try:
            return self.h[v]
        except KeyError:
            raise MissingFieldError(f"no boundary field on vertex {v}") from None

    @classmethod
    def uniform(cls, vertices, h: np.ndarray) -> "FieldAssignment":
        h = np.asarray(h, dtype=float)
        return cls({v: h for v in vertices})


def hamiltonian(params: ModelParams, slice: CayleyTreeSlice, config: Configuration) -> float:
    if len(config.spins) != slice.n_vertices:
        raise ValueError("configuration does not match the slice")
    ising = 0.0
    potts = 0.0
    for x, y in slice.edges():
        (sx, px), (sy, py) = config.spins[x], config.spins[y]
        ising += sx * sy
        potts += px == py
    return -params.alpha * params.J_I * ising - (1 - params.alpha) * params.J_P * potts


def _enumerate_states(n_sites: int, q: int) -> np.ndarray:
    total = (2 * q) ** n_sites
    if total > MAX_ENUMERATION:
        raise SizeLimitError(f"{total} configurations exceed the limit {MAX_ENUMERATION}")
    idx = np.arange(total, dtype=np.int64)
    return np.stack(np.unravel_index(idx, (2 * q,) * n_sites), axis=1) if n_sites else \
        np.zeros((1, 0), dtype=np.int64)


def _interior_log_weights(params, slice, m, states) -> np.ndarray:
    """-beta*H_m for each row of ``states`` (configurations on V_m)."""
    K = pair_log_weights(params)
    out = np.zeros(states.shape[0])
    for x, y in slice.edges(m):
        out += K[states[:, x], states[:, y]]
    return out


def _boundary_terms(fields: FieldAssignment, slice, m, states) -> np.ndarray:
    out = np.zeros(states.shape[0])
    for x in slice.level(m):
        out += fields.on(x).reshape(-1)[states[:, x]]
    return out


def log_partition(params: ModelParams, slice: CayleyTreeSlice, fields: FieldAssignment,
                  n: int | None = None) -> float:
    """log Z_n by upward message passing (fields taken on W_n)."""
    n = slice.n if n is None else n
    K = pair_log_weights(params)
    msg: dict[int, np.ndarray] = {}
    for v in reversed(range(slice.ball_size(n))):
        if slice.generation[v] == n:
            msg[v] = np.asarray(fields.on(v), dtype=float).reshape(-1)
        else:
            acc = np.zeros(2 * params.q)
            for y in slice.children[v]:
                acc += logsumexp(K + msg.pop(y)[None, :], axis=1)
            msg[v] = acc
    return float(logsumexp(msg[0]))


def finite_volume_measure(params: ModelParams, slice: CayleyTreeSlice,
                          fields: FieldAssignment, config: Configuration) -> float:
    """mu_n(config) with boundary fields on W_n, n = slice.n."""
    if len(config.spins) != slice.n_vertices:
        raise ValueError("configuration does not match the slice")
    st = config.states(params.q)[None, :]
    logw = _interior_log_weights(params, slice, slice.n, st)[0]
    logw += _boundary_terms(fields, slice, slice.n, st)[0]
    return math.exp(logw - log_partition(params, slice, fields))


def measure_table(params: ModelParams, slice: CayleyTreeSlice, fields: FieldAssignment,
                  m: int | None = None) -> np.ndarray:
    """mu_m over every configuration of V_m, in row-major state order."""
    m = slice.n if m is None else m
    states = _enumerate_states(slice.ball_size(m), params.q)
    logw = _interior_log_weights(params, slice, m, states) + _boundary_terms(fields, slice, m, states)
    return np.exp(logw - logsumexp(logw))


def compatibility_marginals(params: ModelParams, slice: CayleyTreeSlice,
                            fields: FieldAssignment, n: int,
                            method: str = "factorized") -> tuple[np.ndarray, np.ndarray]:
    """(sum over W_n of mu_n, mu_{n-1}), both indexed by configurations of V_{n-1}."""
    if n < 1 or n > slice.n:
        raise ValueError(f"need 1 <= n <= {slice.n}")
    q = params.q
    inner = slice.ball_size(n - 1)
    if method == "naive":
        full = _enumerate_states(slice.ball_size(n), q)
        logw = (_interior_log_weights(params, slice, n, full)
                + _boundary_terms(fields, slice, n, full))
        logw = logw.reshape(-1, (2 * q) ** (slice.ball_size(n) - inner))
        marg = np.exp(logsumexp(logw, axis=1) - logsumexp(logw))
        del full
        prev = measure_table(params, slice, fields, n - 1)
        return marg, prev
    if method != "factorized":
        raise ValueError(f"unknown method {method!r}")
    states = _enumerate_states(inner, q)
    base = _interior_log_weights(params, slice, n - 1, states)
    K = pair_log_weights(params)
    lead = base.copy()
    for x in slice.level(n - 1):
        per_state = np.zeros(2 * q)
        for y in slice.children[x]:
            per_state += logsumexp(K + np.asarray(fields.on(y), float).reshape(-1)[None, :], axis=1)
        lead += per_state[states[:, x]]
    marg = np.exp(lead - logsumexp(lead))
    prev_log = base + _boundary_terms(fields, slice, n - 1, states)
    prev = np.exp(prev_log - logsumexp(prev_log))
    return marg, prev


def check_compatibility(params: ModelParams, slice: CayleyTreeSlice, fields: FieldAssignment,
                        n: int | None = None, method: str = "auto") -> float:
    """Max |sum_{W_n} mu_n(. v w) - mu_{n-1}(.)| over configurations of V_{n-1}.

    ``auto`` runs the naive enumeration when V_n fits under MAX_ENUMERATION and
    the factorized sum otherwise; when both run they must agree.
    """
    n = slice.n if n is None else n
    q = params.q
    naive_ok = (2 * q) ** slice.ball_size(n) <= MAX_ENUMERATION
    if method == "auto":
        fact = compatibility_marginals(params, slice, fields, n, "factorized")
        dev = float(np.max(np.abs(fact[0] - fact[1])))
        if naive_ok:
            nv = compatibility_marginals(params, slice, fields, n, "naive")
            if not np.allclose(nv[0], fact[0], rtol=0, atol=1e-12):
                raise AssertionError("naive and factorized marginals disagree")
        return dev
    marg, prev = compatibility_marginals(params, slice, fields, n, method)
    return float(np.max(np.abs(marg - prev)))
