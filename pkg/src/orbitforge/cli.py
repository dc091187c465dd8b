"""Command-line interface.

Exit codes: 0 definitive answer, 2 inconclusive verdict, 1 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__
from . import repro
from .criteria import (
    INCONCLUSIVE,
    default_schedule,
    pointwise_gamma_criterion,
    salas_hypercyclic,
    salas_supercyclic,
    theorem_b_check,
)
from .group import RealPoint
from .plan import GreedyInconclusive
from .serialize import (
    SpecError,
    candidate_from_json,
    candidate_to_json,
    dumps,
    gamma_from_inline,
    gamma_from_json,
    jsonable,
    vec_from_json,
    weight_from_json,
)
from .shifts import ShiftSet
from .weights import DiscreteWeight, m_bound, weighted_norm

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2

REPRO_HELP = """experiments and CSV columns:
  claim1   n,s,m_hat,lower,upper,witness_ratio,witness_exact,within_bounds
  claim2   n,p,integral_p,closed_form,lower_bound,ratio,probe_norm_p
  ex52     weight,criterion,shifts,gamma,verdict,log2_bound,detail
  final_z  check,shifts,gamma,verdict,value,certified,detail
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# Loaders
# ---------------------------------------------------------------------------


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SpecError(path, f"invalid JSON: {e}") from None


def load_weight(spec: str, n_max: int = 12):
    """A JSON weight file, or a built-in example name (``ex52_v1`` or ``ex52_v1.json``)."""
    if os.path.exists(spec):
        return weight_from_json(_read_json(spec))
    name = spec[:-5] if spec.endswith(".json") else spec
    if name in repro.NAMES and name != "claim2_vector":
        return repro.build(name, n_max)
    raise SpecError("weight", f"no such file or built-in weight: {spec!r}")


def load_gamma(spec: str):
    if os.path.exists(spec):
        return gamma_from_json(_read_json(spec))
    return gamma_from_inline(spec)


def load_vector(spec: str, n_max: int = 12):
    if os.path.exists(spec):
        return vec_from_json(_read_json(spec))
    name = spec[:-5] if spec.endswith(".json") else spec
    if name == "claim2_vector":
        return repro.claim2_vector(n_max)
    raise SpecError("vector", f"no such file or built-in vector: {spec!r}")


def parse_point(text: str, space: str):
    """``3`` on Z, ``1,-2`` on Z^d, ``0.25`` or ``anchor:offset`` on R."""
    try:
        if space == "R":
            if ":" in text:
                a, off = text.split(":", 1)
                return RealPoint(int(a), float(off))
            return RealPoint(0, float(text))
        if space == "Zd":
            return tuple(int(v) for v in text.split(","))
        return int(text)
    except ValueError:
        raise SpecError("point", f"cannot parse {text!r} as a {space} point") from None


def parse_shifts(text: str, space: str) -> ShiftSet:
    kind, _, arg = text.partition(":")
    if kind in ("all", "half_line_pos", "half_line_neg") and not arg:
        return getattr(ShiftSet, kind)()
    if kind == "generator":
        return ShiftSet.generator(parse_point(arg, space))
    if kind == "list":
        sep = ";" if space == "Zd" else ","
        return ShiftSet.of([parse_point(v, space) for v in arg.split(sep)])
    if kind == "arithmetic":
        a, st = arg.split(",")
        return ShiftSet.arithmetic(int(a), int(st))
    raise SpecError("shifts", f"cannot parse {text!r}")


def parse_schedule(text: str | None, w):
    if text is None:
        return None
    opts = dict(kv.split("=", 1) for kv in text.split(",") if "=" in kv)
    unknown = set(opts) - {"m_max", "eps"}
    if unknown:
        raise SpecError("schedule", f"unknown keys {sorted(unknown)}")
    if opts.get("eps", "pow2") != "pow2":
        raise SpecError("schedule.eps", "only 'pow2' is supported")
    try:
        m_max = int(opts.get("m_max", 20))
    except ValueError:
        raise SpecError("schedule.m_max", "expected an integer") from None
    return default_schedule(w.space, m_max, getattr(w, "dim", 1), getattr(w, "anchors", None))


def parse_range(text: str) -> list[int]:
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(v) for v in text.split(",")]


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out")}


def _emit(args, payload) -> None:
    text = dumps(jsonable({"version": __version__, "config": _config(args), **payload}))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    w = load_weight(args.weight, args.n_max)
    gamma = load_gamma(args.gamma)
    S = parse_shifts(args.shifts, w.space)
    crits = args.criterion.split(",")
    schedule = parse_schedule(args.schedule, w)
    reports = []
    for c in crits:
        if c == "pointwise":
            reports.append(pointwise_gamma_criterion(w, S, gamma, args.horizon))
        elif c == "theorem_b":
            reports.append(theorem_b_check(w, S, gamma, args.p, schedule, args.horizon,
                                           args.variant))
        elif c in ("salas_hyper", "salas_super"):
            if not isinstance(w, DiscreteWeight):
                raise SpecError("criterion", f"{c} needs a weight on Z")
            fn = salas_hypercyclic if c == "salas_hyper" else salas_supercyclic
            reports.append(fn(w, args.q_max, args.horizon))
        else:
            raise SpecError("criterion", f"unknown criterion {c!r}")
    _emit(args, {"reports": [r.as_dict() for r in reports]})
    return EXIT_INCONCLUSIVE if any(r.verdict.type == INCONCLUSIVE for r in reports) else EXIT_OK


def cmd_synth(args) -> int:
    from .synthesis import TargetStream, synthesize

    w = load_weight(args.weight, args.n_max)
    if w.space == "R":
        raise SpecError("weight", "synthesis runs on Z or Z^d only")
    gamma = load_gamma(args.gamma)
    S = parse_shifts(args.shifts, w.space)
    targets = TargetStream(args.width, args.depth, args.seed, w.space, getattr(w, "dim", 1))
    res = synthesize(w, S, gamma, args.p, args.steps, args.trunc, targets, args.horizon)
    if isinstance(res, GreedyInconclusive):
        _emit(args, {"result": {"type": "inconclusive", "step": res.step, "best": res.best, "reason": res.reason}})
        return EXIT_INCONCLUSIVE
    _emit(args, {"result": {"type": "candidate", **candidate_to_json(res)}})
    return EXIT_OK


def cmd_verify(args) -> int:
    from .synthesis import build_vector, certify, measured_error_p

    w = load_weight(args.weight, args.n_max)
    data = _read_json(args.candidate)
    data = data.get("result", data)
    cand = candidate_from_json(data)
    rebuilt = build_vector(cand.plan, cand.targets, cand.truncation)
    rows, ok = [], rebuilt.components == cand.components
    p = cand.plan.p
    for n in range(1, cand.truncation + 1):
        b = certify(cand, n, w)
        stored = dict(cand.certificates).get(n)
        meas = max(measured_error_p(cand, n, w, j) ** (1 / p) for j in range(len(cand.components)))
        good = meas <= b * (1 + 1e-9) and (stored is None or math.isclose(stored, b, rel_tol=1e-12))
        ok = ok and good
        rows.append({"n": n, "bound": b, "measured": meas, "ok": good})
    _emit(args, {"result": {"verified": ok, "components_match": rebuilt.components == cand.components,
                            "targets": rows}})
    return EXIT_OK if ok else EXIT_ERROR


def cmd_repro(args) -> int:
    params = {}
    if args.experiment == "claim1":
        params = {"ns": parse_range(args.n or "2..10"), "n_max": args.n_max}
    elif args.experiment == "claim2":
        ps = tuple(float(v) for v in args.p.split(",")) if args.p else (1.0, 2.0)
        params = {"ns": parse_range(args.n or "2..12"), "ps": ps, "n_max": args.n_max}
    elif args.experiment == "ex52":
        params = {"p": float(args.p) if args.p else 3.0}
    cols, rows = repro.run_experiment(args.experiment, **params)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            repro.write_csv(cols, rows, fh)
    else:
        repro.write_csv(cols, rows, sys.stdout)
    return EXIT_OK


def cmd_mnorm(args) -> int:
    w = load_weight(args.weight, args.n_max)
    s = parse_point(args.s, w.space)
    b = m_bound(w, s, args.horizon)
    from .serialize import point_to_json

    _emit(args, {"result": {"value": b.value, "log2_value": b.log2_value, "certified": b.certified,
                            "witness": point_to_json(b.witness) if b.witness is not None else None,
                            "note": b.note}})
    return EXIT_OK


def cmd_norm(args) -> int:
    w = load_weight(args.weight, args.n_max)
    f = load_vector(args.vector, args.n_max)
    _emit(args, {"result": {"p": args.p, "norm": weighted_norm(f, w, args.p)}})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="orbitforge", description="Density criteria and dense-vector synthesis for weighted translations.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, weight=True):
        if weight:
            sp.add_argument("--weight", required=True, help="weight JSON file or built-in name")
        sp.add_argument("--n-max", type=int, default=12, help="anchor count for built-in real-line objects")
        sp.add_argument("--out", help="output path (default stdout)")

    sp = sub.add_parser("check", help="run density criteria")
    common(sp)
    sp.add_argument("--gamma", default="all")
    sp.add_argument("--shifts", default="all")
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--horizon", type=int, default=4096)
    sp.add_argument("--criterion", default="pointwise", help="comma list of pointwise, theorem_b, salas_hyper, salas_super")
    sp.add_argument("--schedule", help="m_max=K,eps=pow2")
    sp.add_argument("--variant", choices=("sup", "lp"), default="sup")
    sp.add_argument("--q-max", type=int, default=4)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("synth", help="build a truncated dense-vector candidate")
    common(sp)
    sp.add_argument("--gamma", default="all")
    sp.add_argument("--shifts", default="all")
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--steps", type=int, default=20)
    sp.add_argument("--trunc", type=int, default=20)
    sp.add_argument("--width", type=int, default=1)
    sp.add_argument("--depth", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--horizon", type=int, default=4096)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("verify", help="recompute certificates of a candidate")
    common(sp)
    sp.add_argument("--candidate", required=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("repro", help="write experiment tables as CSV",
                        epilog=REPRO_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sp.add_argument("experiment", choices=("claim1", "claim2", "ex52", "final_z"))
    sp.add_argument("--p", help="exponent(s), comma separated")
    sp.add_argument("--n", help="range a..b or comma list")
    sp.add_argument("--n-max", type=int, default=12)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_repro)

    sp = sub.add_parser("mnorm", help="translation operator norm M(s)")
    common(sp)
    sp.add_argument("--s", required=True)
    sp.add_argument("--horizon", type=int, default=64)
    sp.set_defaults(func=cmd_mnorm)

    sp = sub.add_parser("norm", help="weighted norm of a vector")
    common(sp)
    sp.add_argument("--vector", required=True)
    sp.add_argument("--p", type=float, default=2.0)
    sp.set_defaults(func=cmd_norm)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("a subcommand is required")
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (SpecError, ValueError, TypeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
