"""Density criteria as horizon-bounded checkers with tri-valued verdicts.

Every checker returns a :class:`CriterionReport`. A verdict is certified
only when the tail models of a discrete weight settle the infinite part of
the question; otherwise the answer is numeric or inconclusive.

Most computations run in the base-2 log domain so that weights such as
``2**(2**n)`` stay representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import gamma as gm
from .asymptotics import TailExpr
from .gamma import GammaSet
from .group import (
    DiscreteVec,
    EmptyWindow,
    IntBox,
    IntInterval,
    PointSet,
    RealPoint,
    RealUnion,
    add_points,
    disjoint,
    identity,
    measure,
    neg_point,
    shift_window,
    window_points,
)
from .plan import GreedyInconclusive, PlanStep, SynthesisPlan
from .shifts import ShiftSet
from .weights import (
    DiscreteWeight,
    ProductWeight,
    RealWeight,
    group_admissible,
    local_norm_p,
    sublevel_set,
    sup_on,
)

INF = math.inf
SCHEDULE_DEPTH = 20

HOLDS_CERTIFIED = "holds_certified"
HOLDS_NUMERIC = "holds_numeric"
FAILS_CERTIFIED = "fails_certified"
INCONCLUSIVE = "inconclusive"

__all__ = [
    "ShiftSet", "Verdict", "CriterionReport", "salas_hypercyclic", "salas_supercyclic",
    "pointwise_gamma_criterion", "select_good_subset", "theorem_b_check", "default_schedule",
    "theorem_a_series", "greedy_plan", "revalidate",
]


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """``type`` is one of the four verdict constants.

    ``log2_bound`` is the certified lower bound of a failing functional (kept
    in log form since it can exceed double range); ``window`` describes where
    the bound was derived; ``margin`` is the best value reached when
    inconclusive.
    """

    type: str
    log2_bound: float | None = None
    window: dict | None = None
    margin: float | None = None
    horizon: int | None = None

    @property
    def bound(self) -> float | None:
        if self.log2_bound is None:
            return None
        return 2.0 ** self.log2_bound if self.log2_bound < 1024 else INF

    @property
    def holds(self) -> bool:
        return self.type in (HOLDS_CERTIFIED, HOLDS_NUMERIC)


@dataclass(frozen=True)
class CriterionReport:
    kind: str
    verdict: Verdict
    witnesses: tuple = ()
    params: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        from .serialize import jsonable

        v = {"type": self.verdict.type, "witnesses": list(self.witnesses)}
        if self.verdict.log2_bound is not None:
            v["bound"] = self.verdict.bound
            v["log2_bound"] = self.verdict.log2_bound
        if self.verdict.window is not None:
            v["window"] = self.verdict.window
        if self.verdict.margin is not None:
            v["margin"] = self.verdict.margin
        if self.verdict.horizon is not None:
            v["horizon"] = self.verdict.horizon
        d = {"kind": self.kind, "verdict": v, "params": self.params}
        if self.notes:
            d["notes"] = list(self.notes)
        if self.extra:
            d["extra"] = self.extra
        return jsonable(d)


def _pt(p):
    from .serialize import point_to_json

    return point_to_json(p)


def _win(K):
    from .serialize import window_to_json

    return window_to_json(K)


# ---------------------------------------------------------------------------
# Log-domain helpers
# ---------------------------------------------------------------------------


def _log2_weight(w, s) -> float:
    if isinstance(w, DiscreteWeight):
        return w.log2_at(s)
    if isinstance(w, ProductWeight):
        return sum(f.log2_at(x) for f, x in zip(w.factors, s))
    return math.log2(w(s))


def _log2_weights(w, pts) -> np.ndarray:
    if isinstance(w, DiscreteWeight):
        return w.log2_array(np.asarray(pts, dtype=np.int64))
    return np.array([_log2_weight(w, p) for p in pts], dtype=float)


def _gamma_log_bounds(gamma: GammaSet) -> tuple[float, float]:
    lo, hi = gamma.bounds()
    return (math.log2(lo) if lo > 0 else -INF), (math.log2(hi) if hi < INF else INF)


def log2_objective(lc, ld, gamma: GammaSet):
    """``log2`` of ``objective(2**lc, 2**ld, gamma)``, vectorised and inf-safe."""
    lc = np.asarray(lc, dtype=float)
    ld = np.asarray(ld, dtype=float)
    if gamma.kind == "grid":
        lg = np.log2(np.asarray(gamma.grid))
        vals = np.maximum(lg[:, None] + lc.reshape(1, -1), ld.reshape(1, -1) - lg[:, None])
        return vals.min(axis=0).reshape(lc.shape)
    if gamma.kind == "singleton":
        lm = math.log2(gamma.mag0)
        return np.maximum(lm + lc, ld - lm)
    llo, lhi = _gamma_log_bounds(gamma)
    with np.errstate(invalid="ignore"):
        star = np.where(np.isinf(lc) & np.isinf(ld) & (lc == ld), 0.0, (ld - lc) / 2)
        lam = np.clip(star, llo, lhi)
        out = np.maximum(lam + lc, ld - lam)
    both_neg = (lc == -INF) & (ld == -INF)
    return np.where(both_neg, -INF, out)


def _limit_is_zero(C: TailExpr, D: TailExpr, gamma: GammaSet) -> bool:
    k = gamma.kind
    if k == "all":
        return (C + D).limit() == -INF
    if k == "zero_to_one":
        return (C + D).limit() == -INF and D.limit() == -INF
    if k == "one_to_inf":
        return (C + D).limit() == -INF and C.limit() == -INF
    return C.limit() == -INF and D.limit() == -INF


def _log_obj_lower(C: TailExpr, D: TailExpr, gamma: GammaSet, k0: float) -> float:
    """Lower bound of the log objective along the tails for ``k >= k0``."""
    k = gamma.kind
    cd = (C + D).lower_bound(k0) / 2
    if k == "all":
        return cd
    if k == "zero_to_one":
        return max(cd, D.lower_bound(k0))
    if k == "one_to_inf":
        return max(cd, C.lower_bound(k0))
    return float(log2_objective(C.lower_bound(k0), D.lower_bound(k0), gamma))


def _first_finite_lower(fn: Callable[[float], float], limit: int = 4096) -> tuple[float, int]:
    """Smallest ``k0`` in ``0, 1, 2, 4, ...`` at which ``fn(k0)`` is finite."""
    k0 = 0
    while True:
        lb = fn(k0)
        if lb > -INF or k0 >= limit:
            return lb, k0
        k0 = 1 if k0 == 0 else 2 * k0


# ---------------------------------------------------------------------------
# Salas criteria
# ---------------------------------------------------------------------------


def _salas(w: DiscreteWeight, q_max: int, horizon: int, product: bool) -> CriterionReport:
    if not isinstance(w, DiscreteWeight):
        raise TypeError("Salas criteria need a weight on Z")
    kind = "salas_supercyclic" if product else "salas_hypercyclic"
    lo, hi = w.window_lo, w.window_hi
    per_q = []
    for q in range(q_max + 1):
        n0 = max(hi - q + 1, q - lo + 1, 1)   # n >= n0: n+q right of window, q-n left of it
        A = w.right_tail.expr(n0 + q, 1)
        B = w.left_tail.expr(q - n0, -1)
        if product:
            zero = (A + B).limit() == -INF
            lower = lambda k0, A=A, B=B: (A + B).lower_bound(k0)
        else:
            zero = A.limit() == -INF and B.limit() == -INF
            lower = lambda k0, A=A, B=B: float(np.logaddexp2(A.lower_bound(k0), B.lower_bound(k0)))
        if zero:
            per_q.append((q, HOLDS_CERTIFIED, None, n0))
            continue
        lb, k0 = _first_finite_lower(lower)
        if lb > -INF:
            per_q.append((q, FAILS_CERTIFIED, lb, n0 + k0))
            continue
        ns = np.arange(1, horizon + 1)
        la, lb_ = w.log2_array(ns + q), w.log2_array(q - ns)
        vals = la + lb_ if product else np.logaddexp2(la, lb_)
        best = float(vals.min())
        per_q.append((q, HOLDS_NUMERIC if best < -SCHEDULE_DEPTH else INCONCLUSIVE, best, int(ns[vals.argmin()])))
    params = {"q_max": q_max, "horizon": horizon}
    fails = [r for r in per_q if r[1] == FAILS_CERTIFIED]
    table = [{"q": q, "status": st, "log2_value": v, "n_from": n} for q, st, v, n in per_q]
    if fails:
        q, _, lb, n_from = fails[0]
        verdict = Verdict(FAILS_CERTIFIED, log2_bound=lb, window={"q": q, "n_from": n_from})
        return CriterionReport(kind, verdict, (), params, extra={"per_q": table})
    statuses = {r[1] for r in per_q}
    witnesses = tuple({"q": q, "limit": 0.0, "n_from": n} for q, st, _, n in per_q if st == HOLDS_CERTIFIED)
    if statuses == {HOLDS_CERTIFIED}:
        return CriterionReport(kind, Verdict(HOLDS_CERTIFIED), witnesses, params,
                               notes=("tail limits do not depend on q",), extra={"per_q": table})
    if INCONCLUSIVE not in statuses:
        return CriterionReport(kind, Verdict(HOLDS_NUMERIC, horizon=horizon), witnesses, params,
                               extra={"per_q": table})
    best = min(r[2] for r in per_q if r[1] == INCONCLUSIVE)
    return CriterionReport(kind, Verdict(INCONCLUSIVE, margin=2.0 ** best, horizon=horizon), witnesses, params,
                           extra={"per_q": table})


def salas_hypercyclic(w: DiscreteWeight, q_max: int = 4, horizon: int = 4096) -> CriterionReport:
    """``liminf_n w(n+q) + w(q-n) = 0`` for every ``q``."""
    return _salas(w, q_max, horizon, product=False)


def salas_supercyclic(w: DiscreteWeight, q_max: int = 4, horizon: int = 4096) -> CriterionReport:
    """``liminf_n w(n+q) * w(q-n) = 0`` for every ``q``."""
    return _salas(w, q_max, horizon, product=True)


# ---------------------------------------------------------------------------
# Pointwise criterion
# ---------------------------------------------------------------------------


@dataclass
class _Pointwise:
    status: str
    log2_bound: float | None = None
    window: dict | None = None
    witnesses: list = field(default_factory=list)
    best: float = INF


def _offset(a, b):
    return add_points(a, b) if not isinstance(a, RealPoint) else RealPoint(0, a.offset + b.offset)


def _neg(a):
    return neg_point(a) if not isinstance(a, RealPoint) else RealPoint(0, -a.offset)


def _pointwise_core(w, S: ShiftSet, gamma: GammaSet, horizon: int, t0=None, t1=None) -> _Pointwise:
    """inf over s in S of ``objective(w(s+t0), w(-s+t1))``; ``t0 = t1 = 0`` by default."""
    space = w.space
    dim = getattr(w, "dim", 1)
    zero = identity(space, dim)
    t0 = zero if t0 is None else t0
    t1 = zero if t1 is None else t1
    shifts = list(S.enumerate(space, horizon, dim))
    if S.kind == "list":
        shifts = list(S.points)
    res = _Pointwise(INCONCLUSIVE)
    if shifts:
        lc = _log2_weights(w, [_offset(s, t0) for s in shifts])
        ld = _log2_weights(w, [_offset(_neg(s), t1) for s in shifts])
        obj = log2_objective(lc, ld, gamma)
        res.best = float(obj.min())
        i = 0
        for j in range(1, SCHEDULE_DEPTH + 1):
            hits = np.nonzero(obj[i:] < -j)[0]
            if not hits.size:
                break
            i += int(hits[0])
            c, d = 2.0 ** lc[i], 2.0 ** ld[i]
            o = gm.objective(c, d, gamma)
            res.witnesses.append({"s": _pt(shifts[i]), "lambda": o.argmin, "c": c, "d": d,
                                  "value": o.value, "eps": 2.0 ** -j})
    if isinstance(w, DiscreteWeight):
        if S.kind == "list":
            res.status = FAILS_CERTIFIED if res.best > -INF else HOLDS_CERTIFIED
            res.log2_bound = res.best
            res.window = {"shifts": "all listed"}
            return _numeric_grid(res, gamma)
        progs = S.progressions()
        if progs is not None:
            return _numeric_grid(_certify_progressions(w, progs, gamma, t0, t1, res), gamma)
    if len(res.witnesses) == SCHEDULE_DEPTH:
        res.status = HOLDS_NUMERIC
    return res


def _numeric_grid(res: _Pointwise, gamma: GammaSet) -> _Pointwise:
    # grid magnitudes are never certified
    if gamma.kind == "grid" and res.status == HOLDS_CERTIFIED:
        res.status = HOLDS_NUMERIC
    elif gamma.kind == "grid" and res.status == FAILS_CERTIFIED:
        res.status = INCONCLUSIVE
    return res


def _certify_progressions(w: DiscreteWeight, progs, gamma, t0, t1, res: _Pointwise) -> _Pointwise:
    bounds = []
    for a, sig in progs:
        k0 = max(w.tail_start(a + t0, sig), w.tail_start(-a + t1, -sig))
        C = w.tail_expr(a + t0 + sig * k0, sig)
        D = w.tail_expr(-a + t1 - sig * k0, -sig)
        if _limit_is_zero(C, D, gamma):
            res.status = HOLDS_CERTIFIED
            res.window = {"progression": [a, sig], "k_from": k0}
            return res
        lb, k1 = _first_finite_lower(lambda k: _log_obj_lower(C, D, gamma, k))
        if lb == -INF:
            return res
        ks = np.arange(0, k0 + k1)
        ss = a + sig * ks
        head = log2_objective(w.log2_array(ss + t0), w.log2_array(-ss + t1), gamma) if ks.size else np.array([INF])
        bounds.append((min(lb, float(head.min())), a, sig, k0 + k1))
    lb, a, sig, kf = min(bounds)
    res.status = FAILS_CERTIFIED
    res.log2_bound = lb
    res.window = {"progressions": [[a2, s2] for _, a2, s2, _ in bounds], "exact_below_k": kf}
    return res


def pointwise_gamma_criterion(w, S: ShiftSet, gamma: GammaSet, horizon: int = 4096) -> CriterionReport:
    """Is ``inf_{s in S} inf_{lam} max(|lam| w(s), w(-s)/|lam|)`` zero?"""
    core = _pointwise_core(w, S, gamma, horizon)
    adm = group_admissible(w, 64)
    params = {"S": S.as_dict(), "gamma": gamma.magnitudes().as_dict(), "horizon": horizon}
    notes = []
    extra = {"group_admissible": adm.verdict, "admissibility_certified": adm.certified}
    if adm.verdict != "admissible":
        notes.append("weight is not admissible for every translation: necessary-condition semantics only")
        if isinstance(w, DiscreteWeight):
            sc = salas_supercyclic(w, horizon=min(horizon, 4096))
            extra["cross_check"] = {"salas_supercyclic": sc.verdict.type, "log2_bound": sc.verdict.log2_bound,
                                    "window": sc.verdict.window}
    if gamma.kind == "grid":
        notes.append("grid magnitudes give numeric results only")
    verdict = Verdict(core.status, log2_bound=core.log2_bound, window=core.window,
                      margin=(2.0 ** core.best if core.status == INCONCLUSIVE else None),
                      horizon=horizon if core.status in (HOLDS_NUMERIC, INCONCLUSIVE) else None)
    return CriterionReport("pointwise_gamma", verdict, tuple(core.witnesses), params, tuple(notes), extra)


# ---------------------------------------------------------------------------
# Subset selection and the windowed criterion
# ---------------------------------------------------------------------------


def select_good_subset(w, F, s, theta_c: float, theta_d: float):
    """``E = {t in F : w(s+t) <= theta_c and w(-s+t) <= theta_d}`` and ``measure(F) - measure(E)``."""
    if isinstance(w, RealWeight):
        tab = w.anchors
        sp = s if s.anchor < len(tab) else RealPoint(0, s.offset)
        E1 = shift_window(sublevel_set(w, shift_window(F, sp), theta_c), neg_point(sp, tab))
        E2 = shift_window(sublevel_set(w, shift_window(F, neg_point(sp, tab)), theta_d), sp)
        from .group import intersect_real

        E = intersect_real(intersect_real(E1, E2), F)
        return E, measure(F) - measure(E)
    pts = window_points(F)
    good = [t for t in pts if w(add_points(s, t)) <= theta_c and w(add_points(neg_point(s), t)) <= theta_d]
    if isinstance(w, DiscreteWeight):
        E = PointSet(tuple(good)) if good else EmptyWindow()
    else:
        E = tuple(good)
    return E, len(pts) - len(good)


def default_schedule(space: str = "Z", m_max: int = SCHEDULE_DEPTH, dim: int = 1, anchors=None):
    """``F_m = [-m, m]`` (boxes on Z^d, intervals on R) with ``eps_m = 2**-m``."""
    out = []
    for m in range(1, m_max + 1):
        if space == "Z":
            F = IntInterval(-m, m)
        elif space == "Zd":
            F = IntBox((-m,) * dim, (m,) * dim)
        else:
            from .group import AnchorTable

            F = RealUnion(((0, -float(m), float(m)),), anchors or AnchorTable())
        out.append((F, 2.0 ** -m))
    return out


def _window_log_stats(w: DiscreteWeight, F, ss: np.ndarray, p: float, variant: str):
    """Per-shift log2 of sup (or p-th power sum) of w over ``F + s`` for each ``s`` in ``ss``."""
    pts = np.asarray(window_points(F), dtype=np.int64)
    grid = ss[:, None] + pts[None, :]
    lv = w.log2_array(grid.ravel()).reshape(grid.shape)
    if variant == "sup":
        return lv.max(axis=1)
    m = lv.max(axis=1, keepdims=True)
    with np.errstate(invalid="ignore"):
        s = np.log2(np.exp2(p * (lv - m)).sum(axis=1)) / p + m[:, 0]
    return s


def theorem_b_check(w, S: ShiftSet, gamma: GammaSet, p: float = 2.0, schedule=None, horizon: int = 4096,
                    variant: str = "sup") -> CriterionReport:
    """For each ``(F, eps)`` look for ``s`` and ``lam`` with ``|lam| c < eps`` and ``d / |lam| < eps``.

    ``c`` and ``d`` are the sup (``variant="sup"``) or local p-norm
    (``variant="lp"``) of the weight over ``s + F`` and ``-s + F``. On R the
    windows may be thinned to a good subset whose deficit stays below eps.
    """
    if variant not in ("sup", "lp"):
        raise ValueError("variant must be 'sup' or 'lp'")
    dim = getattr(w, "dim", 1)
    if schedule is None:
        schedule = default_schedule(w.space, dim=dim, anchors=getattr(w, "anchors", None))
    schedule = list(schedule)
    if not schedule:
        raise ValueError("schedule must not be empty")
    params = {"S": S.as_dict(), "gamma": gamma.magnitudes().as_dict(), "p": p, "horizon": horizon,
              "variant": variant, "schedule": [{"F": _win(F), "eps": e} for F, e in schedule]}
    shifts = list(S.points) if S.kind == "list" else list(S.enumerate(w.space, horizon, dim))
    witnesses = []
    for m, (F, eps) in enumerate(schedule, start=1):
        hit, best = _search_item(w, shifts, gamma, p, F, eps, variant)
        if hit is None:
            fail = _certify_item_failure(w, S, gamma, F, eps, horizon)
            if fail is not None:
                return CriterionReport("theorem_b", Verdict(FAILS_CERTIFIED, log2_bound=fail.log2_bound,
                                                            window={"item": m, "F": _win(F), "eps": eps,
                                                                    **(fail.window or {})}),
                                       tuple(witnesses), params)
            return CriterionReport("theorem_b", Verdict(INCONCLUSIVE, margin=best, horizon=horizon,
                                                        window={"item": m, "F": _win(F), "eps": eps}),
                                   tuple(witnesses), params)
        hit["item"] = m
        witnesses.append(hit)
    notes = []
    certified = False
    if isinstance(w, DiscreteWeight) and gamma.kind != "grid":
        adm = group_admissible(w, 64)
        pw = _pointwise_core(w, S, gamma, horizon)
        certified = adm.verdict == "admissible" and adm.certified and pw.status == HOLDS_CERTIFIED
        if certified:
            notes.append("every window follows from the certified pointwise limit and bounded translations")
    v = Verdict(HOLDS_CERTIFIED) if certified else Verdict(HOLDS_NUMERIC, horizon=horizon)
    return CriterionReport("theorem_b", v, tuple(witnesses), params, tuple(notes))


def _search_item(w, shifts, gamma, p, F, eps, variant):
    """First shift (canonical order) meeting one schedule item; also returns the best objective/eps."""
    best = INF
    if isinstance(w, DiscreteWeight) and shifts:
        ss = np.asarray(shifts, dtype=np.int64)
        lc = _window_log_stats(w, F, ss, p, variant)
        ld = _window_log_stats(w, F, -ss, p, variant)
        obj = log2_objective(lc, ld, gamma) - math.log2(eps)
        best = float(2.0 ** obj.min())
        for i in np.nonzero(obj < 0)[0]:
            c, d = 2.0 ** lc[i], 2.0 ** ld[i]
            ok, lam = gm.feasible(c, d, eps, gamma)
            if ok:
                return {"s": int(ss[i]), "lambda": lam, "F": _win(F), "E": _win(F), "c": c, "d": d,
                        "eps": eps, "deficit": 0}, best
        return None, best
    for s in shifts:
        c, d = _cd(w, F, s, p, variant)
        best = min(best, gm.objective(c, d, gamma).value / eps)
        ok, lam = gm.feasible(c, d, eps, gamma)
        if ok:
            return {"s": _pt(s), "lambda": lam, "F": _win(F), "E": _win(F), "c": c, "d": d,
                    "eps": eps, "deficit": 0}, best
        if isinstance(w, RealWeight):
            hit = _thin_real(w, F, s, gamma, p, eps, variant, c, d)
            if hit is not None:
                return hit, best
    return None, best


def _cd(w, F, s, p, variant, E=None):
    E = F if E is None else E
    tab = getattr(w, "anchors", None)
    A, B = shift_window(E, s), shift_window(E, neg_point(s, tab) if tab else neg_point(s))
    if variant == "sup":
        return sup_on(w, A), sup_on(w, B)
    return local_norm_p(w, A, p) ** (1 / p), local_norm_p(w, B, p) ** (1 / p)


def _thin_real(w: RealWeight, F, s, gamma, p, eps, variant, c, d, tries: int = 48):
    o = gm.objective(c, d, gamma)
    start = o.argmin if 0 < o.argmin < INF else gamma.clip(1.0)
    for i, lam in enumerate(gamma.neighbours(start)):
        if i >= tries:
            break
        shrink = 1 - 1e-12
        E, deficit = select_good_subset(w, F, s, eps / lam * shrink, eps * lam * shrink)
        if not deficit < eps or measure(E) == 0:
            continue
        cE, dE = _cd(w, F, s, p, variant, E)
        if lam * cE < eps and dE / lam < eps:
            return {"s": _pt(s), "lambda": lam, "F": _win(F), "E": _win(E), "c": cE, "d": dE,
                    "eps": eps, "deficit": deficit}
    return None


def _certify_item_failure(w, S, gamma, F, eps, horizon):
    """A schedule item fails for every ``s`` when the pointwise objective at some ``t0 in F`` stays >= eps."""
    if not isinstance(w, DiscreteWeight) or gamma.kind == "grid":
        return None
    pts = window_points(F)
    t = 0 if 0 in pts else pts[len(pts) // 2]
    core = _pointwise_core(w, S, gamma, horizon, t0=t, t1=t)
    if core.status == FAILS_CERTIFIED and core.log2_bound >= math.log2(eps):
        core.window = {**(core.window or {}), "t0": t, "t1": t}
        return core
    return None


# ---------------------------------------------------------------------------
# Plan series and greedy plans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesResult:
    partial_sum: float
    disjoint_ok: bool
    matrix: np.ndarray


def _shift_by(K, s, tab=None):
    return shift_window(K, s)


def _pair_term(w, p, stp_n: PlanStep, stp_k: PlanStep, alpha_weighted: bool) -> float:
    """``alpha_k (lam_n/lam_k)**p ||w||_p**p`` over ``F_k + s_n - s_k``."""
    if isinstance(stp_k.F, EmptyWindow):
        return 0.0
    K = shift_window(shift_window(stp_k.F, stp_n.s), neg_point(stp_k.s))
    a = stp_k.alpha if alpha_weighted else 1.0
    return a * (stp_n.lam / stp_k.lam) ** p * local_norm_p(w, K, p)


def theorem_a_series(plan: SynthesisPlan, w, p: float | None = None, N: int | None = None,
                     alpha_weighted: bool = False) -> SeriesResult:
    """Partial double sum over ``0 <= n, k <= N``, ``n != k``, and the disjointness of ``F_k - s_k``."""
    if plan.space != w.space:
        from .group import SpaceMismatch

        raise SpaceMismatch("plan and weight live on different spaces")
    p = plan.p if p is None else p
    steps = plan.with_origin()
    N = len(steps) - 1 if N is None else N
    steps = steps[: N + 1]
    M = np.zeros((len(steps), len(steps)))
    for i, sn in enumerate(steps):
        for j, sk in enumerate(steps):
            if i != j:
                M[i, j] = _pair_term(w, p, sn, sk, alpha_weighted)
    placed = [shift_window(st.F, neg_point(st.s)) for st in steps]
    ok = all(disjoint(placed[i], placed[j]) for i in range(len(placed)) for j in range(i))
    return SeriesResult(math.fsum(M.ravel()), ok, M)


def greedy_plan(w, S: ShiftSet, gamma: GammaSet, p: float, windows, horizon: int = 4096, alphas=None,
                extra_check: Callable | None = None, lam_tries: int = 64):
    """Build ``(s_n, lam_n, F_n)`` step by step under the three budget conditions.

    At step ``n`` (1-based) a candidate must keep ``F_n - s_n`` disjoint from
    the earlier placed windows and make each of

    * ``alpha_n ||w||^p(F_n - s_n) / lam**p``
    * ``sum_k alpha_k (lam/lam_k)**p ||w||^p(F_k + s - s_k)``
    * ``sum_k alpha_n (lam_k/lam)**p ||w||^p(F_n + s_k - s)``

    smaller than ``2**-n``. Shifts are tried in canonical order; magnitudes
    walk outward from the unconstrained optimum. ``extra_check(n, s, lam,
    steps)`` may veto a candidate. Returns a :class:`SynthesisPlan` or
    :class:`GreedyInconclusive`.
    """
    windows = list(windows)
    alphas = [1.0] * len(windows) if alphas is None else list(alphas)
    dim = getattr(w, "dim", 1)
    space = w.space
    shifts = list(S.points) if S.kind == "list" else list(S.enumerate(space, horizon, dim))
    steps: list[PlanStep] = []
    placed = []
    for n, (F, alpha) in enumerate(zip(windows, alphas), start=1):
        budget = 2.0 ** -n
        found = None
        best = INF
        for s in shifts:
            own = shift_window(F, neg_point(s))
            if not all(disjoint(own, K) for K in placed):
                continue
            A = local_norm_p(w, own, p)
            Bs = [local_norm_p(w, shift_window(shift_window(st.F, s), neg_point(st.s)), p) for st in steps]
            Cs = [local_norm_p(w, shift_window(shift_window(F, st.s), neg_point(s)), p) for st in steps]
            X = math.fsum(st.alpha * st.lam ** -p * b for st, b in zip(steps, Bs))
            Y1 = alpha * A
            Y3 = alpha * math.fsum(st.lam ** p * c for st, c in zip(steps, Cs))
            cp = (X / budget) ** (1 / p)
            dp = (max(Y1, Y3) / budget) ** (1 / p)
            obj = gm.objective(cp, dp, gamma)
            best = min(best, obj.value)
            if not obj.value < 1:
                continue
            start = obj.argmin if 0 < obj.argmin < INF else gamma.clip(dp if dp > 0 else 1.0)
            for i, lam in enumerate(gamma.neighbours(start)):
                if i >= lam_tries:
                    break
                vals = (Y1 / lam ** p, lam ** p * X, Y3 / lam ** p)
                if all(v < budget for v in vals) and (extra_check is None or extra_check(n, s, lam, steps, F)):
                    found = PlanStep(n, s, lam, F, alpha, vals)
                    break
            if found is not None:
                break
        if found is None:
            partial = SynthesisPlan(space, p, gamma, tuple(steps), dim)
            reason = "no shift within horizon meets the step budgets"
            return GreedyInconclusive(n, best, partial, reason)
        steps.append(found)
        placed.append(shift_window(F, neg_point(found.s)))
    return SynthesisPlan(space, p, gamma, tuple(steps), dim)


# ---------------------------------------------------------------------------
# Witness replay
# ---------------------------------------------------------------------------


def revalidate(report: CriterionReport, w, gamma: GammaSet, p: float = 2.0) -> list[bool]:
    """Replay each witness of a pointwise or windowed-criterion report through the weight model."""
    from .serialize import point_from_json, window_from_json

    out = []
    for wit in report.witnesses:
        if report.kind == "pointwise_gamma":
            s = point_from_json(wit["s"])
            if isinstance(s, RealPoint):
                c, d = w(s), w(RealPoint(0, -s.offset))
            else:
                c, d = w(s), w(neg_point(s))
            lam = wit["lambda"]
            val = gm.objective(c, d, gamma).value
            ok = val < wit["eps"]
            if 0 < lam < INF:
                ok = ok and max(lam * c, d / lam) < wit["eps"] * (1 + 1e-12)
            out.append(bool(ok))
        elif report.kind == "theorem_b":
            s = point_from_json(wit["s"])
            E = window_from_json(wit["E"])
            variant = report.params.get("variant", "sup")
            c, d = _cd(w, E, s, p, variant)
            lam, eps = wit["lambda"], wit["eps"]
            out.append(bool(lam * c < eps and d / lam < eps and gamma.contains(lam)))
        elif "limit" in wit:
            out.append(True)
    return out
