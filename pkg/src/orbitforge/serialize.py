"""JSON encodings for points, windows, vectors, weights and Gamma sets.

Encoders emit plain dicts with a canonical key order; ``dumps`` fixes the
layout so that saving a loaded object reproduces the input byte for byte.
"""

from __future__ import annotations

import json
import math

from .gamma import GammaSet
from .group import (
    AnchorTable,
    DiscreteVec,
    EmptyWindow,
    IntBox,
    IntInterval,
    PointSet,
    RealPoint,
    RealUnion,
    StepVec,
)
from .weights import (
    Affine,
    Const,
    DiscreteWeight,
    Exp2,
    Log2Affine,
    Log2DoubleExp,
    ProductWeight,
    RealWeight,
    Recip,
    Segment,
)


class SpecError(ValueError):
    """Malformed JSON spec; ``field`` names the offending key."""

    def __init__(self, field: str, msg: str):
        super().__init__(f"{field}: {msg}")
        self.field = field


def _num(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, float) and x.is_integer() and abs(x) < 2 ** 53:
        return x
    return x


def _req(d: dict, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise SpecError(f"{where}.{key}" if where else key, "missing")
    return d[key]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=False) + "\n"


# points ---------------------------------------------------------------------


def point_to_json(p):
    if isinstance(p, RealPoint):
        return {"anchor": p.anchor, "offset": p.offset}
    if isinstance(p, tuple):
        return list(p)
    return int(p)


def point_from_json(x, where="point"):
    if isinstance(x, dict):
        return RealPoint(int(_req(x, "anchor", where)), float(_req(x, "offset", where)))
    if isinstance(x, list):
        return tuple(int(v) for v in x)
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    raise SpecError(where, f"not a group point: {x!r}")


# anchors / windows ----------------------------------------------------------


def anchors_to_json(tab: AnchorTable):
    n = len(tab) - 1
    if tab == AnchorTable.factorial(n):
        return f"factorial:{n}"
    return list(tab.positions)


def anchors_from_json(x, where="anchors"):
    if isinstance(x, str) and x.startswith("factorial:"):
        try:
            return AnchorTable.factorial(int(x.split(":", 1)[1]))
        except ValueError as e:
            raise SpecError(where, str(e)) from None
    if isinstance(x, list):
        try:
            return AnchorTable(tuple(int(v) for v in x))
        except (TypeError, ValueError) as e:
            raise SpecError(where, str(e)) from None
    raise SpecError(where, f"expected 'factorial:N' or a list, got {x!r}")


def window_to_json(K):
    if isinstance(K, EmptyWindow):
        return {"empty": True, "space": K.space}
    if isinstance(K, IntInterval):
        return {"lo": K.lo, "hi": K.hi}
    if isinstance(K, PointSet):
        return {"points": list(K.points)}
    if isinstance(K, IntBox):
        return {"lo": list(K.lo), "hi": list(K.hi)}
    return {"anchors": anchors_to_json(K.anchors), "intervals": [[a, lo, hi] for a, lo, hi in K.intervals]}


def window_from_json(x, where="window"):
    if not isinstance(x, dict):
        raise SpecError(where, "expected an object")
    if x.get("empty"):
        return EmptyWindow(x.get("space", "Z"))
    if "points" in x:
        return PointSet(tuple(x["points"]))
    if "intervals" in x:
        tab = anchors_from_json(x.get("anchors", [0]), f"{where}.anchors")
        return RealUnion(tuple((int(a), float(lo), float(hi)) for a, lo, hi in x["intervals"]), tab)
    lo, hi = _req(x, "lo", where), _req(x, "hi", where)
    if isinstance(lo, list):
        return IntBox(tuple(lo), tuple(hi))
    return IntInterval(lo, hi)


# vectors --------------------------------------------------------------------


def vec_to_json(f) -> dict:
    if isinstance(f, DiscreteVec):
        d = {"space": f.space}
        if f.space == "Zd":
            d["dim"] = f.dim
        d["entries"] = [{"point": point_to_json(p), "re": c.real, "im": c.imag} for p, c in f.entries]
        return d
    return {
        "space": "R",
        "anchors": anchors_to_json(f.anchors),
        "entries": [{"anchor": a, "lo": lo, "hi": hi, "re": c.real, "im": c.imag} for a, lo, hi, c in f.pieces],
    }


def vec_from_json(x, where="vector"):
    space = _req(x, "space", where)
    entries = _req(x, "entries", where)
    if space == "R":
        tab = anchors_from_json(x.get("anchors", [0]), f"{where}.anchors")
        pieces = []
        for i, e in enumerate(entries):
            w = f"{where}.entries[{i}]"
            pieces.append((int(_req(e, "anchor", w)), float(_req(e, "lo", w)), float(_req(e, "hi", w)),
                           complex(float(_req(e, "re", w)), float(e.get("im", 0.0)))))
        return StepVec(tuple(pieces), tab)
    if space not in ("Z", "Zd"):
        raise SpecError(f"{where}.space", f"unknown space {space!r}")
    ents = []
    for i, e in enumerate(entries):
        w = f"{where}.entries[{i}]"
        ents.append((point_from_json(_req(e, "point", w), f"{w}.point"),
                     complex(float(_req(e, "re", w)), float(e.get("im", 0.0)))))
    dim = int(x.get("dim", len(ents[0][0]) if space == "Zd" and ents else 1))
    return DiscreteVec(space, tuple(ents), dim)


# weights --------------------------------------------------------------------


def tail_from_json(x, where):
    kind = _req(x, "kind", where)
    if kind == "log2affine":
        return Log2Affine(float(_req(x, "a", where)), float(_req(x, "b", where)))
    if kind == "log2doubleexp":
        return Log2DoubleExp(int(_req(x, "sign", where)), float(_req(x, "c", where)), float(_req(x, "b", where)),
                             float(x.get("offset", 0.0)))
    raise SpecError(f"{where}.kind", f"unknown tail kind {kind!r}")


_KINDS = {"const": Const, "affine": Affine, "exp2": Exp2, "recip": Recip}


def _kind_from_json(x, where):
    k = _req(x, "kind", where)
    if k not in _KINDS:
        raise SpecError(f"{where}.kind", f"unknown segment kind {k!r}")
    cls = _KINDS[k]
    args = [float(_req(x, "A", where))]
    if cls in (Affine, Exp2):
        args.append(float(_req(x, "B", where)))
    return cls(*args)


def _discrete_to_json(w: DiscreteWeight) -> dict:
    win: dict = {"lo": w.window_lo, "hi": w.window_hi}
    if all(math.isfinite(v) and v > 0 for v in w.values) and all(
            math.log2(v) == lv for v, lv in zip(w.values, w.log2_values)):
        win["values"] = list(w.values)
    else:
        win["log2_values"] = list(w.log2_values)
    return {"space": "Z", "window": win, "left_tail": w.left_tail.as_dict(), "right_tail": w.right_tail.as_dict()}


def weight_to_json(w) -> dict:
    if isinstance(w, DiscreteWeight):
        return _discrete_to_json(w)
    if isinstance(w, ProductWeight):
        return {"space": "Zd", "factors": [_discrete_to_json(f) for f in w.factors]}
    return {
        "space": "R",
        "anchors": anchors_to_json(w.anchors),
        "segments": [{"anchor": a, "lo": s.lo, "hi": s.hi, **s.kind.as_dict()} for a, ss in w.segments for s in ss],
        "default": w.default,
    }


def _discrete_from_json(x, where):
    win = _req(x, "window", where)
    lo, hi = int(_req(win, "lo", f"{where}.window")), int(_req(win, "hi", f"{where}.window"))
    left = tail_from_json(_req(x, "left_tail", where), f"{where}.left_tail")
    right = tail_from_json(_req(x, "right_tail", where), f"{where}.right_tail")
    try:
        if "log2_values" in win:
            return DiscreteWeight(lo, hi, left_tail=left, right_tail=right, log2_values=tuple(win["log2_values"]))
        vals = _req(win, "values", f"{where}.window")
        return DiscreteWeight(lo, hi, tuple(vals), left, right)
    except ValueError as e:
        raise SpecError(f"{where}.window", str(e)) from None


def weight_from_json(x, where="weight"):
    space = _req(x, "space", where)
    if space == "Z":
        return _discrete_from_json(x, where)
    if space == "Zd":
        return ProductWeight(tuple(_discrete_from_json(f, f"{where}.factors[{i}]")
                                   for i, f in enumerate(_req(x, "factors", where))))
    if space != "R":
        raise SpecError(f"{where}.space", f"unknown space {space!r}")
    tab = anchors_from_json(_req(x, "anchors", where), f"{where}.anchors")
    groups: dict[int, list] = {}
    for i, s in enumerate(_req(x, "segments", where)):
        w = f"{where}.segments[{i}]"
        groups.setdefault(int(_req(s, "anchor", w)), []).append(
            Segment(float(_req(s, "lo", w)), float(_req(s, "hi", w)), _kind_from_json(s, w)))
    try:
        return RealWeight(tab, tuple((a, tuple(ss)) for a, ss in groups.items()), float(x.get("default", 1.0)))
    except ValueError as e:
        raise SpecError(f"{where}.segments", str(e)) from None


# gamma ----------------------------------------------------------------------


def gamma_to_json(g: GammaSet) -> dict:
    return g.as_dict()


def gamma_from_json(x, where="gamma"):
    kind = _req(x, "kind", where)
    try:
        if kind == "all":
            return GammaSet.all()
        if kind == "annulus":
            return GammaSet.annulus(_req(x, "r", where), _req(x, "R", where))
        if kind == "zero_to_one":
            return GammaSet.zero_to_one()
        if kind == "one_to_inf":
            return GammaSet.one_to_inf()
        if kind == "singleton":
            if "magnitude" in x:
                return GammaSet.singleton(float(x["magnitude"]))
            return GammaSet.singleton(complex(float(_req(x, "re", where)), float(x.get("im", 0.0))))
        if kind == "grid":
            return GammaSet.of_grid(_req(x, "grid", where))
    except ValueError as e:
        raise SpecError(where, str(e)) from None
    raise SpecError(f"{where}.kind", f"unknown gamma kind {kind!r}")


def gamma_from_inline(text: str) -> GammaSet:
    """``all``, ``singleton:1``, ``annulus:r,R``, ``zero_to_one``, ``one_to_inf``,
    ``grid:m1,m2,...`` or ``grid:pow2:K`` (magnitudes ``2**k``, ``0 <= k <= K``)."""
    kind, _, arg = text.partition(":")
    try:
        if kind in ("all", "zero_to_one", "one_to_inf") and not arg:
            return getattr(GammaSet, kind)()
        if kind == "singleton":
            return GammaSet.singleton(complex(arg.replace(" ", "")))
        if kind == "annulus":
            r, R = arg.split(",")
            return GammaSet.annulus(float(r), float(R))
        if kind == "grid":
            if arg.startswith("pow2:"):
                return GammaSet.of_grid([2.0 ** k for k in range(int(arg[5:]) + 1)])
            return GammaSet.of_grid([float(v) for v in arg.split(",")])
    except ValueError as e:
        raise SpecError("gamma", str(e)) from None
    raise SpecError("gamma", f"cannot parse {text!r}")


def _jsonable(x):
    if isinstance(x, float):
        if math.isnan(x):
            return None
        return _num(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, RealPoint) or isinstance(x, tuple) and not x:
        return point_to_json(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def jsonable(x):
    """Replace infinities, complex numbers and points with JSON-safe values."""
    return _jsonable(x)


# plans / candidates ---------------------------------------------------------


def plan_to_json(plan) -> dict:
    return {
        "space": plan.space,
        "dim": plan.dim,
        "p": plan.p,
        "gamma": gamma_to_json(plan.gamma),
        "steps": [{"n": st.n, "s": point_to_json(st.s), "lambda": st.lam, "F": window_to_json(st.F),
                   "alpha": st.alpha, "values": list(st.values)} for st in plan.steps],
    }


def plan_from_json(x, where="plan"):
    from .plan import PlanStep, SynthesisPlan

    steps = []
    for i, st in enumerate(_req(x, "steps", where)):
        w = f"{where}.steps[{i}]"
        steps.append(PlanStep(int(_req(st, "n", w)), point_from_json(_req(st, "s", w), f"{w}.s"),
                              float(_req(st, "lambda", w)), window_from_json(_req(st, "F", w), f"{w}.F"),
                              float(st.get("alpha", 1.0)), tuple(st.get("values", (0.0, 0.0, 0.0)))))
    return SynthesisPlan(_req(x, "space", where), float(_req(x, "p", where)),
                         gamma_from_json(_req(x, "gamma", where), f"{where}.gamma"), tuple(steps),
                         int(x.get("dim", 1)))


def candidate_to_json(c) -> dict:
    return {
        "components": [vec_to_json(f) for f in c.components],
        "truncation": c.truncation,
        "targets": c.targets.as_dict(),
        "plan": plan_to_json(c.plan),
        "norm_bound_p": c.norm_bound_p,
        "certificates": [{"n": n, "bound": b} for n, b in c.certificates],
    }


def candidate_from_json(x, where="candidate"):
    from .synthesis import DenseVectorCandidate, TargetStream

    t = _req(x, "targets", where)
    targets = TargetStream(int(t.get("width", 1)), int(t.get("depth", 1)), int(t.get("seed", 0)),
                           t.get("space", "Z"), int(t.get("dim", 1)))
    comps = tuple(vec_from_json(v, f"{where}.components[{i}]") for i, v in enumerate(_req(x, "components", where)))
    certs = tuple((int(c["n"]), float(c["bound"])) for c in x.get("certificates", []))
    return DenseVectorCandidate(comps, plan_from_json(_req(x, "plan", where), f"{where}.plan"),
                                int(_req(x, "truncation", where)), certs, float(x.get("norm_bound_p", math.nan)),
                                targets)
