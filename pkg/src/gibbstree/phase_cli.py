"""Command line: classify | sweep | thresholds | verify | sample-poly.

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 size guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .boundary_law import (
    BoundaryField,
    propagate_fields,
    translation_invariant_fields,
)
from .isingpotts_model import (
    ModelParams,
    SizeLimitError,
    build_slice,
    check_compatibility,
)
from .tigm_solver import (
    DegenerateCase,
    case2_critical_points,
    case1_k2_threshold,
    classify_case1,
    classify_case2_k2_q3,
    count_case2,
    count_quartic_positive_roots,
    quartic_q3_equal,
    scan_thresholds,
    solve_case1,
    solve_case2,
    theta_c,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3
SWEEP_PARAMS = ("thetaP", "thetaI", "a", "b", "JI", "JP", "alpha")


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    param: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        if self.param not in SWEEP_PARAMS:
            raise InputError(f"cannot sweep {self.param!r}; choose from {', '.join(SWEEP_PARAMS)}")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.lo < self.hi:
            raise InputError(f"sweep range needs lo < hi, got ({self.lo}, {self.hi})")
        if self.steps < 2:
            raise InputError("sweep needs at least 2 steps")

    def grid(self) -> list[float]:
        return [float(x) for x in np.linspace(self.lo, self.hi, self.steps)]


@dataclass
class RunConfig:
    command: str
    params: ModelParams | None = None
    sweep: SweepSpec | None = None
    tol: float | None = None
    out: str | None = None
    fmt: str = "json"
    options: dict = field(default_factory=dict)


# ----------------------------------------------------------------------------
# parameter plumbing


def _point_spec(ns) -> dict:
    keys = ("q", "k", "alpha", "beta", "JI", "JP", "thetaI", "thetaP", "a", "b")
    return {k: getattr(ns, k, None) for k in keys}


def params_from_spec(spec: dict, equal_couplings: bool = False) -> ModelParams:
    """Model point from flags: (a, b), else (thetaI, thetaP), else (JI, JP)."""
    q, k = spec.get("q") or 3, spec.get("k") or 2
    beta = spec.get("beta") or 1.0
    alpha = spec.get("alpha")
    a, b = spec.get("a"), spec.get("b")
    if a is not None or b is not None:
        if equal_couplings:
            a = a if a is not None else b
            b = a
        if a is None or b is None:
            raise InputError("give both --a and --b, or --equal-couplings")
        if alpha is None:
            alpha = 0.0 if a == 1 else (1.0 if b == 1 else 0.5)
        return ModelParams.from_ab(q, k, a, b, alpha=alpha, beta=beta)
    alpha = 0.0 if alpha is None else alpha
    if spec.get("thetaI") is not None or spec.get("thetaP") is not None:
        p = ModelParams.from_thetas(q, k, alpha, spec.get("thetaI") or 1.0,
                                    spec.get("thetaP") or 1.0, beta)
    else:
        p = ModelParams(q, k, alpha, beta, spec.get("JI") or 0.0, spec.get("JP") or 0.0)
    if equal_couplings:
        p = ModelParams.from_ab(q, k, p.a, p.a, alpha=alpha if 0 < alpha < 1 else 0.5, beta=beta)
    return p


def _load_params(ns) -> ModelParams:
    if getattr(ns, "params", None):
        with open(ns.params) as fh:
            p = ModelParams.from_json(fh.read())
        if ns.equal_couplings:
            p = ModelParams.from_ab(p.q, p.k, p.a, p.a, alpha=p.alpha if 0 < p.alpha < 1 else 0.5,
                                    beta=p.beta)
        return p
    return params_from_spec(_point_spec(ns), ns.equal_couplings)


def _is_case2_point(p: ModelParams) -> bool:
    return p.k == 2 and p.q == 3 and math.isclose(p.a, p.b, rel_tol=1e-15) and p.a != 1.0


# ----------------------------------------------------------------------------
# output


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _json(obj) -> str:
    # json writes floats with repr(): the shortest string that round-trips
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


# ----------------------------------------------------------------------------
# commands


def cmd_classify(cfg: RunConfig) -> tuple[dict, int]:
    p = cfg.params
    c1 = classify_case1(p).to_dict()
    doc = dict(c1)
    doc["case1"] = c1
    if _is_case2_point(p):
        c2 = classify_case2_k2_q3(p.a).to_dict()
        doc.update(c2)
        doc["case1"], doc["case2"] = c1, c2
    doc.pop("solutions", None)
    doc["point"] = p.to_dict()
    return doc, EXIT_OK


def _sweep_point(args) -> tuple[float, int, int]:
    spec, param, x, case, equal = args
    if param == "a" and case == 2:
        spec = dict(spec, a=x, b=x)
    else:
        spec = dict(spec)
        spec[param] = x
    p = params_from_spec(spec, equal)
    if case == 2:
        try:
            c = classify_case2_k2_q3(p.a)
        except DegenerateCase:
            c = classify_case1(p)
    else:
        c = classify_case1(p)
    return x, c.count, c.validated_count


def _workers() -> int:
    try:
        n = int(os.environ.get("GIBBSTREE_THREADS", "1"))
    except ValueError:
        raise InputError("GIBBSTREE_THREADS must be an integer")
    return max(1, n)


def cmd_sweep(cfg: RunConfig) -> tuple[list, int]:
    sw = cfg.sweep
    case = cfg.options.get("case")
    if case is None:
        case = 2 if cfg.options.get("equal_couplings") and sw.param == "a" else 1
    if case == 2 and sw.param != "a":
        raise InputError("Case-2 sweeps run along a (with b = a)")
    spec = cfg.options["spec"]
    jobs = [(spec, sw.param, x, case, cfg.options.get("equal_couplings", False)) for x in sw.grid()]
    # validate the first point in-process so bad input fails fast with exit 2
    _sweep_point(jobs[0])
    n = _workers()
    if n > 1:
        with ProcessPoolExecutor(max_workers=n) as ex:
            rows = list(ex.map(_sweep_point, jobs))  # map keeps grid order
    else:
        rows = [_sweep_point(j) for j in jobs]
    return rows, EXIT_OK


def cmd_thresholds(cfg: RunConfig) -> tuple[dict, int]:
    which = cfg.options.get("classifier", "case2")
    lo, hi = cfg.options["lo"], cfg.options["hi"]
    if not lo < hi:
        raise InputError("threshold search needs lo < hi")
    tol = cfg.tol or 1e-4
    steps = cfg.options.get("steps", 200)
    if which == "quartic":
        variant = cfg.options.get("variant", "eliminant")
        cls = lambda a: count_quartic_positive_roots(a, variant)  # noqa: E731
        cands = ()
    elif which == "case2":
        cls = lambda a: count_case2(a, a, 3)  # noqa: E731
        cands = case2_critical_points()
    elif which == "case1":
        p = cfg.params

        def cls(th):
            return classify_case1(ModelParams.from_thetas(p.q, p.k, p.alpha, p.theta_I, th, p.beta)).count
        cands = []
        if p.alpha < 1:
            if p.k == 2:
                cands = [case1_k2_threshold(p.q, p.alpha)]
            elif p.k > 2:
                cands = [theta_c(p.k, p.q, p.alpha)]
    else:
        raise InputError(f"unknown classifier {which!r}")
    found = scan_thresholds(cls, lo, hi, tol, steps, cands)
    return {
        "classifier": which,
        "range": [lo, hi],
        "tol": tol,
        "thresholds": [t.point for t in found],
        "details": [{"point": t.point, "left": t.left, "at": t.at, "right": t.right, "kind": t.kind}
                    for t in found],
    }, EXIT_OK


def _solutions_for_verify(p: ModelParams) -> list[tuple[str, BoundaryField]]:
    out = []
    for z in solve_case1(p):
        out.append(("trivial" if z == 1.0 else "case1_cubic", BoundaryField.from_I1(p.q, z)))
    if p.k == 2 and p.a != 1.0:
        # I2 solutions with z1 = z2 are the I1 roots already listed
        for s in solve_case2(p):
            z1, z2 = s.coordinates
            if s.valid and abs(z1 - z2) > 1e-9 * max(z1, z2):
                out.append((s.source, BoundaryField.from_I2(p.q, z1, z2)))
    return out


def perturb(z: BoundaryField, factor: float) -> BoundaryField:
    """Multiply every free entry by ``factor``; the pinned entry stays 1."""
    arr = np.array(z.z) * factor
    arr[1, -1] = 1.0
    return BoundaryField(arr)


def verify_solutions(p: ModelParams, depth: int = 2, factor: float | None = None,
                     method: str = "auto", tol: float = 1e-9) -> dict:
    sl = build_slice(p.k, depth)
    results = []
    for source, z in _solutions_for_verify(p):
        zz = perturb(z, factor) if factor else z
        fields = translation_invariant_fields(sl, zz)
        dev = check_compatibility(p, sl, fields, method=method)
        leaves = {v: zz for v in sl.level(depth)}
        prop = propagate_fields(p, sl, leaves)
        # the root of a full slice has k+1 children, so only k-child vertices
        # are expected to reproduce z
        drift = max(float(np.max(np.abs(prop[v].z - zz.z))) for v in prop
                    if len(sl.children[v]) in (0, p.k))
        results.append({"source": source, "z": zz.z.tolist(), "deviation": dev,
                        "propagation_drift": drift, "pass": dev <= tol})
    worst = max((r["deviation"] for r in results), default=0.0)
    return {"point": p.to_dict(), "depth": depth, "method": method, "perturb": factor,
            "tol": tol, "results": results, "max_deviation": worst,
            "passed": all(r["pass"] for r in results)}


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    o = cfg.options
    rep = verify_solutions(cfg.params, o.get("depth", 2), o.get("perturb"), o.get("method", "auto"),
                           cfg.tol or 1e-9)
    return rep, EXIT_OK if rep["passed"] else EXIT_FAIL


def cmd_sample_poly(cfg: RunConfig) -> tuple[dict, int]:
    o = cfg.options
    a, lo, hi, n = o["a"], o["lo"], o["hi"], o.get("steps", 20001)
    if a is None or not a > 0:
        raise InputError("sample-poly needs --a > 0")
    if not lo < hi or n < 2:
        raise InputError("sample-poly needs lo < hi and at least 2 samples")
    P = quartic_q3_equal(a, o.get("variant", "eliminant"))
    xs = np.linspace(lo, hi, n)
    ys = [P.evalf(float(x)) for x in xs]
    signs = np.sign(ys)
    signs = signs[signs != 0]
    changes = int(np.sum(signs[1:] != signs[:-1]))
    return {"a": a, "variant": o.get("variant", "eliminant"), "interval": [lo, hi],
            "samples": [[float(x), y] for x, y in zip(xs, ys)], "max": max(ys),
            "sign_changes": changes}, EXIT_OK


# ----------------------------------------------------------------------------
# argument parsing


def _add_point_flags(sp: argparse.ArgumentParser):
    g = sp.add_argument_group("model point")
    g.add_argument("--q", type=int, default=3)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--alpha", type=float, default=None)
    g.add_argument("--beta", type=float, default=1.0)
    g.add_argument("--JI", type=float, default=None)
    g.add_argument("--JP", type=float, default=None)
    g.add_argument("--thetaI", type=float, default=None)
    g.add_argument("--thetaP", type=float, default=None)
    g.add_argument("--a", type=float, default=None)
    g.add_argument("--b", type=float, default=None)
    g.add_argument("--params", help="JSON file with a model point")
    g.add_argument("--equal-couplings", action="store_true",
                   help="force b = a (Case-2 convention J_I = alpha/(1-alpha) J_P)")


def _add_io_flags(sp: argparse.ArgumentParser, default_fmt: str = "json"):
    sp.add_argument("--out", help="write here instead of stdout")
    sp.add_argument("--format", choices=("json", "csv"), default=default_fmt)
    sp.add_argument("--tol", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gibbstree",
                                 description="Translation-invariant Gibbs measures of the "
                                             "(2,q)-Ising-Potts model on Cayley trees.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("classify", help="count TIGMs at one point")
    _add_point_flags(sp)
    _add_io_flags(sp)

    sp = sub.add_parser("sweep", help="counts along a parameter grid")
    _add_point_flags(sp)
    _add_io_flags(sp, "csv")
    sp.add_argument("--param", default="thetaP")
    sp.add_argument("--lo", type=float, required=True)
    sp.add_argument("--hi", type=float, required=True)
    sp.add_argument("--steps", type=int, default=100)
    sp.add_argument("--case", type=int, choices=(1, 2), default=None)

    sp = sub.add_parser("thresholds", help="locate count changes")
    _add_point_flags(sp)
    _add_io_flags(sp)
    sp.add_argument("--classifier", choices=("quartic", "case2", "case1"), default="case2")
    sp.add_argument("--lo", type=float, default=None)
    sp.add_argument("--hi", type=float, default=None)
    sp.add_argument("--steps", type=int, default=200)
    sp.add_argument("--variant", choices=("eliminant", "display"), default="eliminant")

    sp = sub.add_parser("verify", help="finite-volume compatibility check of every solution")
    _add_point_flags(sp)
    _add_io_flags(sp)
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--perturb", type=float, default=None,
                    help="multiply the free field entries by this factor first")
    sp.add_argument("--method", choices=("auto", "naive", "factorized"), default="auto")

    sp = sub.add_parser("sample-poly", help="samples of the q=3, b=a quartic for plotting")
    _add_io_flags(sp, "csv")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--lo", type=float, default=0.0)
    sp.add_argument("--hi", type=float, default=3.0)
    sp.add_argument("--steps", type=int, default=20001)
    sp.add_argument("--variant", choices=("eliminant", "display"), default="eliminant")
    return ap


def config_from_args(ns) -> RunConfig:
    cfg = RunConfig(ns.command, tol=ns.tol, out=ns.out, fmt=ns.format)
    if ns.command == "sample-poly":
        cfg.options = {"a": ns.a, "lo": ns.lo, "hi": ns.hi, "steps": ns.steps, "variant": ns.variant}
        return cfg
    if ns.command == "thresholds":
        lo = ns.lo if ns.lo is not None else (1.0 if ns.classifier == "case1" else 1.1)
        hi = ns.hi if ns.hi is not None else 10.0
        cfg.options = {"classifier": ns.classifier, "lo": lo, "hi": hi, "steps": ns.steps,
                       "variant": ns.variant}
        if ns.classifier != "case1":
            return cfg
    cfg.params = _load_params(ns)
    if ns.command == "sweep":
        cfg.sweep = SweepSpec(ns.param, ns.lo, ns.hi, ns.steps)
        cfg.options = {"case": ns.case, "equal_couplings": ns.equal_couplings,
                       "spec": _point_spec(ns)}
    elif ns.command == "verify":
        if ns.depth < 1:
            raise InputError("--depth must be at least 1")
        cfg.options = {"depth": ns.depth, "perturb": ns.perturb, "method": ns.method}
    return cfg


COMMANDS = {
    "classify": cmd_classify,
    "sweep": cmd_sweep,
    "thresholds": cmd_thresholds,
    "verify": cmd_verify,
    "sample-poly": cmd_sample_poly,
}


def _render(cfg: RunConfig, result) -> str:
    if cfg.command == "sweep":
        if cfg.fmt == "csv":
            return _csv(("param", "count", "validated_count"), result)
        return _json([{"param": x, "count": c, "validated_count": v} for x, c, v in result])
    if cfg.command == "sample-poly" and cfg.fmt == "csv":
        return _csv(("x", "P"), result["samples"])
    if cfg.fmt == "csv":
        if cfg.command == "thresholds":
            return _csv(("point", "left", "at", "right", "kind"),
                        [(d["point"], d["left"], d["at"], d["right"], d["kind"])
                         for d in result["details"]])
        if cfg.command == "verify":
            return _csv(("source", "deviation", "pass"),
                        [(r["source"], r["deviation"], r["pass"]) for r in result["results"]])
        return _csv(("count", "validated_count", "regime"),
                    [(result["count"], result["validated_count"], result["regime"])])
    return _json(result)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
        result, code = COMMANDS[cfg.command](cfg)
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(_render(cfg, result), cfg.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
