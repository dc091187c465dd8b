"""Weight models, local norms, suprema and translation operator norms.

Three weight families are provided:

* :class:`DiscreteWeight` on Z -- explicit values on a window plus two
  certified tail models outside it;
* :class:`ProductWeight` on Z^d -- a tensor product of discrete weights;
* :class:`RealWeight` on R -- anchored piecewise segments (constant, affine,
  base-2 exponential, reciprocal) with a constant default elsewhere.

Integrals of ``w**p`` over real windows use closed-form antiderivatives per
segment kind, written in ``expm1``/``log1p`` form so that short intervals and
nearly flat pieces keep full relative precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ._parallel import pmap
from .asymptotics import TailExpr
from .group import (
    AnchorTable,
    DiscreteVec,
    EmptyWindow,
    IntBox,
    IntInterval,
    PointSet,
    RealPoint,
    RealUnion,
    SpaceMismatch,
    StepVec,
    space_of,
    window_points,
)
from .shifts import ShiftSet

LN2 = math.log(2.0)
INF = math.inf


def exp2(x: float) -> float:
    """``2**x`` saturating to ``inf`` / ``0`` instead of raising."""
    if x >= 1024.0:
        return INF
    if x <= -1100.0:
        return 0.0
    return 2.0 ** x


def _check_p(p: float):
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")


# ---------------------------------------------------------------------------
# Tail models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Log2Affine:
    """``log2 w(n) = a + b*n``."""

    a: float
    b: float

    def log2(self, n):
        return self.a + self.b * np.asarray(n, dtype=float) if isinstance(n, np.ndarray) else self.a + self.b * n

    def expr(self, n0: int, sigma: int) -> TailExpr:
        return TailExpr(self.a + self.b * n0, self.b * sigma)

    def shifted(self, c: float) -> Log2Affine:
        return Log2Affine(self.a + c, self.b)

    def as_dict(self):
        return {"kind": "log2affine", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class Log2DoubleExp:
    """``log2 w(n) = offset + sign * c * 2**(b*n)``."""

    sign: int
    c: float
    b: float
    offset: float = 0.0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if not self.c > 0:
            raise ValueError("c must be positive")

    def log2(self, n):
        if isinstance(n, np.ndarray):
            with np.errstate(over="ignore"):
                return self.offset + self.sign * self.c * np.exp2(self.b * n.astype(float))
        return self.offset + self.sign * self.c * 2.0 ** min(self.b * n, 1023.0)

    def expr(self, n0: int, sigma: int) -> TailExpr:
        coeff = self.sign * self.c * 2.0 ** (self.b * n0)
        return TailExpr(self.offset, 0.0, ((self.b * sigma, coeff),))

    def shifted(self, c: float) -> Log2DoubleExp:
        return Log2DoubleExp(self.sign, self.c, self.b, self.offset + c)

    def as_dict(self):
        d = {"kind": "log2doubleexp", "sign": self.sign, "c": self.c, "b": self.b}
        if self.offset:
            d["offset"] = self.offset
        return d


TailModel = Union[Log2Affine, Log2DoubleExp]


# ---------------------------------------------------------------------------
# Operator-norm results
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MBound:
    """``sup_t w(t+s)/w(t)``; ``log2_value`` is kept because ``value`` may saturate."""

    value: float
    certified: bool
    witness: object
    log2_value: float = math.nan
    note: str = ""

    @property
    def finite(self) -> bool:
        lv = self.log2_value if not math.isnan(self.log2_value) else math.log2(self.value) if self.value > 0 else -INF
        return lv < INF


def _mbound_from_log2(lv: float, certified: bool, witness, note: str = "") -> MBound:
    return MBound(exp2(lv), certified, witness, lv, note)


# ---------------------------------------------------------------------------
# Discrete weights on Z
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteWeight:
    """Weight on Z: explicit values on ``[window_lo, window_hi]``, tail models outside.

    The tails must agree with the window values at the two window edges.
    ``log2_values`` may be given instead of ``values`` for weights whose
    values overflow a double.
    """

    window_lo: int
    window_hi: int
    values: tuple = ()
    left_tail: TailModel = field(default_factory=lambda: Log2Affine(0.0, 0.0))
    right_tail: TailModel = field(default_factory=lambda: Log2Affine(0.0, 0.0))
    log2_values: tuple = ()

    space = "Z"
    dim = 1

    def __post_init__(self):
        n = self.window_hi - self.window_lo + 1
        if n < 1:
            raise ValueError("weight window must be non-empty")
        if self.log2_values:
            lv = tuple(float(v) for v in self.log2_values)
            vals = tuple(exp2(v) for v in lv)
        else:
            vals = tuple(float(v) for v in self.values)
            if any(not (v > 0) or not math.isfinite(v) for v in vals):
                raise ValueError("weight values must be positive and finite")
            lv = tuple(math.log2(v) for v in vals)
        if len(lv) != n:
            raise ValueError(f"expected {n} window values, got {len(lv)}")
        if any(not math.isfinite(v) for v in lv):
            raise ValueError("weight values must be positive and finite")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "log2_values", lv)
        for tail, edge, val in ((self.left_tail, self.window_lo, lv[0]), (self.right_tail, self.window_hi, lv[-1])):
            t = float(tail.log2(edge))
            if abs(t - val) > 1.5e-12 + 1e-15 * abs(val):
                raise ValueError(f"tail model disagrees with window value at n={edge}: {t} vs {val}")
        object.__setattr__(self, "_lv", np.array(lv))

    @classmethod
    def from_tails(cls, left: TailModel, right: TailModel, lo: int = -2, hi: int = 2, split: int = 0):
        """Window filled from ``left`` for ``n < split`` and ``right`` for ``n >= split``."""
        lv = [float(left.log2(n)) if n < split else float(right.log2(n)) for n in range(lo, hi + 1)]
        return cls(lo, hi, left_tail=left, right_tail=right, log2_values=tuple(lv))

    def log2_array(self, ns) -> np.ndarray:
        ns = np.asarray(ns, dtype=np.int64)
        out = np.empty(ns.shape, dtype=float)
        lo, hi = self.window_lo, self.window_hi
        left, right = ns < lo, ns > hi
        mid = ~(left | right)
        out[mid] = self._lv[ns[mid] - lo]
        if left.any():
            out[left] = self.left_tail.log2(ns[left])
        if right.any():
            out[right] = self.right_tail.log2(ns[right])
        return out

    def log2_at(self, n: int) -> float:
        if self.window_lo <= n <= self.window_hi:
            return self.log2_values[n - self.window_lo]
        tail = self.left_tail if n < self.window_lo else self.right_tail
        return float(tail.log2(n))

    def value_array(self, ns) -> np.ndarray:
        ns = np.asarray(ns, dtype=np.int64)
        lo, hi = self.window_lo, self.window_hi
        inside = (ns >= lo) & (ns <= hi)
        if inside.all():
            return np.asarray(self.values)[ns - lo]
        with np.errstate(over="ignore", under="ignore"):
            out = np.exp2(self.log2_array(ns))
        if inside.any():
            out[inside] = np.asarray(self.values)[ns[inside] - lo]
        return out

    def __call__(self, n: int) -> float:
        if self.window_lo <= n <= self.window_hi:
            return self.values[n - self.window_lo]
        return exp2(self.log2_at(n))

    def tail_expr(self, n0: int, sigma: int) -> TailExpr:
        """log2 w(n0 + sigma*k) as a closed form; valid while the argument stays in one tail."""
        tail = self.right_tail if (n0 > self.window_hi or (n0 >= self.window_lo and sigma > 0)) else self.left_tail
        return tail.expr(n0, sigma)

    def tail_start(self, n0: int, sigma: int) -> int:
        """Smallest k >= 0 with ``n0 + sigma*k`` strictly outside the window."""
        if sigma > 0:
            return max(0, -((n0 - self.window_hi - 1) // sigma)) if n0 <= self.window_hi else 0
        if sigma < 0:
            return max(0, -((self.window_lo - 1 - n0) // (-sigma))) if n0 >= self.window_lo else 0
        raise ValueError("sigma must be nonzero")

    def scaled(self, kappa: float) -> DiscreteWeight:
        c = math.log2(kappa)
        return DiscreteWeight(self.window_lo, self.window_hi, tuple(kappa * v for v in self.values),
                              self.left_tail.shifted(c), self.right_tail.shifted(c)) \
            if all(math.isfinite(kappa * v) and kappa * v > 0 for v in self.values) else \
            DiscreteWeight(self.window_lo, self.window_hi, left_tail=self.left_tail.shifted(c),
                           right_tail=self.right_tail.shifted(c),
                           log2_values=tuple(v + c for v in self.log2_values))


@dataclass(frozen=True)
class ProductWeight:
    """``w(x) = prod_i w_i(x_i)`` on Z^d."""

    factors: tuple[DiscreteWeight, ...]

    space = "Zd"

    @property
    def dim(self):
        return len(self.factors)

    def __call__(self, x) -> float:
        return math.prod(w(xi) for w, xi in zip(self.factors, x))

    def scaled(self, kappa: float) -> ProductWeight:
        return ProductWeight((self.factors[0].scaled(kappa),) + self.factors[1:])


# ---------------------------------------------------------------------------
# Real-line segment kinds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    A: float

    def value(self, u):
        return self.A + 0.0 * u

    def logderiv(self):
        return 0.0, 1.0, 0.0

    def integral_p(self, u0, u1, p):
        return self.A ** p * (u1 - u0)

    def sublevel(self, u0, u1, theta):
        return (u0, u1) if self.A <= theta else None

    def check_span(self, lo, hi):
        return self.A > 0

    def as_dict(self):
        return {"kind": "const", "A": self.A}


@dataclass(frozen=True)
class Affine:
    """``A + B*u``."""

    A: float
    B: float

    def value(self, u):
        return self.A + self.B * u

    def logderiv(self):
        return self.B, self.A, self.B

    def integral_p(self, u0, u1, p):
        y0 = self.A + self.B * u0
        if self.B == 0:
            return y0 ** p * (u1 - u0)
        dy = self.B * (u1 - u0)
        return y0 ** (p + 1) * math.expm1((p + 1) * math.log1p(dy / y0)) / ((p + 1) * self.B)

    def sublevel(self, u0, u1, theta):
        if self.B == 0:
            return (u0, u1) if self.A <= theta else None
        root = (theta - self.A) / self.B
        lo, hi = (u0, min(u1, root)) if self.B > 0 else (max(u0, root), u1)
        return (lo, hi) if lo <= hi else None

    def check_span(self, lo, hi):
        return self.value(lo) > 0 and self.value(hi) > 0

    def as_dict(self):
        return {"kind": "affine", "A": self.A, "B": self.B}


@dataclass(frozen=True)
class Exp2:
    """``A * 2**(B*u)``."""

    A: float
    B: float

    def value(self, u):
        return self.A * 2.0 ** (self.B * u)

    def logderiv(self):
        return self.B * LN2, 1.0, 0.0

    def integral_p(self, u0, u1, p):
        k = p * self.B * LN2
        head = self.A ** p * 2.0 ** (p * self.B * u0)
        if k == 0:
            return head * (u1 - u0)
        return head * math.expm1(k * (u1 - u0)) / k

    def sublevel(self, u0, u1, theta):
        if self.B == 0:
            return (u0, u1) if self.A <= theta else None
        root = math.log2(theta / self.A) / self.B
        lo, hi = (u0, min(u1, root)) if self.B > 0 else (max(u0, root), u1)
        return (lo, hi) if lo <= hi else None

    def check_span(self, lo, hi):
        return self.A > 0

    def as_dict(self):
        return {"kind": "exp2", "A": self.A, "B": self.B}


@dataclass(frozen=True)
class Recip:
    """``A / u``; the span must not contain ``u = 0``."""

    A: float

    def value(self, u):
        if u == 0:
            raise ZeroDivisionError("reciprocal segment evaluated at u = 0")
        return self.A / u

    def logderiv(self):
        return -1.0, 0.0, 1.0

    def integral_p(self, u0, u1, p):
        x0, x1 = sorted((abs(u0), abs(u1)))
        r = math.log(x1 / x0)
        if p == 1:
            return abs(self.A) * r
        return abs(self.A) ** p * x0 ** (1 - p) * math.expm1((1 - p) * r) / (1 - p)

    def sublevel(self, u0, u1, theta):
        # A/u <= theta  <=>  u >= A/theta on the positive branch
        root = self.A / theta
        if u0 > 0:
            lo, hi = max(u0, root), u1
        else:
            lo, hi = u0, min(u1, root)
        return (lo, hi) if lo <= hi else None

    def check_span(self, lo, hi):
        return (lo > 0 or hi < 0) and self.A / lo > 0 and self.A / hi > 0

    def as_dict(self):
        return {"kind": "recip", "A": self.A}


Kind = Union[Const, Affine, Exp2, Recip]


def _kind_sup(kind: Kind, u0: float, u1: float) -> tuple[float, float]:
    """(sup, argsup) of a monotone kind on ``[u0, u1]``."""
    if isinstance(kind, Const):
        return kind.A, u0 if math.isfinite(u0) else u1 if math.isfinite(u1) else 0.0
    a, b = kind.value(u0), kind.value(u1)
    return (a, u0) if a >= b else (b, u1)


@dataclass(frozen=True)
class Segment:
    lo: float
    hi: float
    kind: Kind

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))


@dataclass(frozen=True)
class _Piece:
    anchor: int
    lo: float
    hi: float
    kind: Kind


@dataclass(frozen=True)
class RealWeight:
    """Piecewise weight on R in anchor-local coordinates ``u = t - a_anchor``.

    ``segments`` maps anchor ids to contiguous segment lists; the weight is
    ``default`` wherever no segment applies.
    """

    anchors: AnchorTable
    segments: tuple[tuple[int, tuple[Segment, ...]], ...]
    default: float = 1.0
    _pieces: tuple = field(init=False, repr=False, compare=False, default=())

    space = "R"

    def __post_init__(self):
        if not self.default > 0:
            raise ValueError("default weight value must be positive")
        segs = tuple(sorted((int(a), tuple(ss)) for a, ss in self.segments))
        object.__setattr__(self, "segments", segs)
        tab = self.anchors
        flat = []
        for a, ss in segs:
            if not 0 <= a < len(tab):
                raise ValueError(f"segment anchor {a} not in anchor table")
            for s1, s2 in zip(ss, ss[1:]):
                if s1.hi != s2.lo:
                    raise ValueError(f"segments at anchor {a} are not contiguous")
            for s in ss:
                if not s.lo < s.hi:
                    raise ValueError(f"empty or reversed segment at anchor {a}")
                if not s.kind.check_span(s.lo, s.hi):
                    raise ValueError(f"segment {s} at anchor {a} is not positive on its span")
                flat.append(_Piece(a, s.lo, s.hi, s.kind))
        flat.sort(key=lambda pc: tab.absolute(pc.anchor, pc.lo))
        for p1, p2 in zip(flat, flat[1:]):
            if tab.rebase(p1.anchor, p1.hi, p2.anchor) > p2.lo:
                raise ValueError("segments of different anchors overlap")
        pieces = []
        dflt = Const(self.default)
        if not flat:
            pieces.append(_Piece(0, -INF, INF, dflt))
        else:
            pieces.append(_Piece(flat[0].anchor, -INF, flat[0].lo, dflt))
            for p1, p2 in zip(flat, flat[1:]):
                pieces.append(p1)
                gap_hi = tab.rebase(p2.anchor, p2.lo, p1.anchor)
                if gap_hi > p1.hi:
                    pieces.append(_Piece(p1.anchor, p1.hi, gap_hi, dflt))
            pieces.append(flat[-1])
            pieces.append(_Piece(flat[-1].anchor, flat[-1].hi, INF, dflt))
        object.__setattr__(self, "_pieces", tuple(pieces))

    def pieces(self, horizon: int | None = None) -> tuple:
        """Pieces covering R; with ``horizon``, segments of anchors beyond it read as default."""
        if horizon is None or all(a <= horizon for a, _ in self.segments):
            return self._pieces
        trimmed = tuple((a, ss) for a, ss in self.segments if a <= horizon)
        return RealWeight(self.anchors, trimmed, self.default)._pieces

    def __call__(self, t: RealPoint) -> float:
        tab = self.anchors
        for pc in self._pieces:
            u = tab.rebase(t.anchor, t.offset, pc.anchor)
            if pc.lo <= u <= pc.hi:
                return float(pc.kind.value(u))
        raise AssertionError("pieces do not cover the real line")

    def overlaps(self, anchor: int, lo: float, hi: float, horizon: int | None = None):
        """Yield ``(piece, u0, u1)`` for the parts of ``[lo, hi]`` (at ``anchor``) inside each piece."""
        tab = self.anchors
        for pc in self.pieces(horizon):
            u0 = max(pc.lo, tab.rebase(anchor, lo, pc.anchor))
            u1 = min(pc.hi, tab.rebase(anchor, hi, pc.anchor))
            if u1 > u0:
                yield pc, u0, u1

    def scaled(self, kappa: float) -> RealWeight:
        def sc(k):
            if isinstance(k, Const):
                return Const(kappa * k.A)
            if isinstance(k, Affine):
                return Affine(kappa * k.A, kappa * k.B)
            if isinstance(k, Exp2):
                return Exp2(kappa * k.A, k.B)
            return Recip(kappa * k.A)

        segs = tuple((a, tuple(Segment(s.lo, s.hi, sc(s.kind)) for s in ss)) for a, ss in self.segments)
        return RealWeight(self.anchors, segs, kappa * self.default)


Weight = Union[DiscreteWeight, ProductWeight, RealWeight]


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def _same_space(w, space):
    if w.space != space:
        raise SpaceMismatch(f"weight lives on {w.space}, argument on {space}")


def evaluate(w: Weight, t) -> float:
    """Pointwise value ``w(t)``."""
    _same_space(w, space_of(t))
    return float(w(t))


def _pth_power_sum_z(w: DiscreteWeight, pts, p) -> float:
    if len(pts) == 0:
        return 0.0
    lv = w.log2_array(np.asarray(pts))
    with np.errstate(over="ignore", under="ignore"):
        return math.fsum(np.exp2(p * lv))


def local_norm_p(w: Weight, K, p: float, horizon: int | None = None) -> float:
    """``integral_K w**p`` (the p-th power of the local norm)."""
    _check_p(p)
    _same_space(w, K.space)
    if isinstance(K, EmptyWindow):
        return 0.0
    if isinstance(w, DiscreteWeight):
        if isinstance(K, IntInterval):
            return _pth_power_sum_z(w, np.arange(K.lo, K.hi + 1), p)
        return _pth_power_sum_z(w, np.asarray(K.points), p)
    if isinstance(w, ProductWeight):
        if not isinstance(K, IntBox) or K.dim != w.dim:
            raise SpaceMismatch("product weights need a box of matching dimension")
        return math.prod(_pth_power_sum_z(f, np.arange(l, h + 1), p) for f, l, h in zip(w.factors, K.lo, K.hi))
    if K.anchors != w.anchors:
        raise SpaceMismatch("window and weight use different anchor tables")
    total = []
    for a, lo, hi in K.intervals:
        for pc, u0, u1 in w.overlaps(a, lo, hi, horizon):
            total.append(pc.kind.integral_p(u0, u1, p))
    return math.fsum(total)


def local_norm(w: Weight, K, p: float) -> float:
    """``||w||_{p,K} = (integral_K w**p)**(1/p)``."""
    return local_norm_p(w, K, p) ** (1.0 / p)


def weighted_norm_p(f, w: Weight, p: float) -> float:
    _check_p(p)
    _same_space(w, f.space)
    if isinstance(f, DiscreteVec):
        if not f.entries:
            return 0.0
        pts = [q for q, _ in f.entries]
        coeffs = np.abs(np.array([c for _, c in f.entries]))
        if isinstance(w, ProductWeight):
            ws = np.array([w(q) for q in pts])
        else:
            ws = w.value_array(np.asarray(pts))
        with np.errstate(over="ignore", under="ignore"):
            return math.fsum((coeffs * ws) ** p)
    if not isinstance(w, RealWeight):
        raise SpaceMismatch("step functions need a real-line weight")
    if f.anchors != w.anchors:
        raise SpaceMismatch("vector and weight use different anchor tables")
    parts = []
    for a, lo, hi, c in f.pieces:
        for pc, u0, u1 in w.overlaps(a, lo, hi):
            parts.append(abs(c) ** p * pc.kind.integral_p(u0, u1, p))
    return math.fsum(parts)


def weighted_norm(f, w: Weight, p: float) -> float:
    """``||f||_{p,w} = (sum or integral of |f|**p w**p)**(1/p)``."""
    if isinstance(f, DiscreteVec) and f.entries:
        _check_p(p)
        _same_space(w, f.space)
        pts = [q for q, _ in f.entries]
        ws = np.array([w(q) for q in pts]) if isinstance(w, ProductWeight) else w.value_array(np.asarray(pts))
        terms = np.abs(np.array([c for _, c in f.entries])) * ws
        top = float(terms.max())
        if top == 0 or not math.isfinite(top):
            return top
        # factor out the largest term so tiny or huge entries neither underflow nor overflow
        return top * math.fsum((terms / top) ** p) ** (1.0 / p)
    return weighted_norm_p(f, w, p) ** (1.0 / p)


def sup_on(w: Weight, K) -> float:
    """Exact supremum of ``w`` over the window ``K`` (0 for the empty window)."""
    return sup_with_arg(w, K)[0]


def sup_with_arg(w: Weight, K):
    _same_space(w, K.space)
    if isinstance(K, EmptyWindow):
        return 0.0, None
    if isinstance(w, DiscreteWeight):
        pts = np.arange(K.lo, K.hi + 1) if isinstance(K, IntInterval) else np.asarray(K.points)
        lv = w.log2_array(pts)
        i = int(np.argmax(lv))
        return w(int(pts[i])), int(pts[i])
    if isinstance(w, ProductWeight):
        best = []
        for f, l, h in zip(w.factors, K.lo, K.hi):
            v, x = sup_with_arg(f, IntInterval(l, h))
            best.append((v, x))
        return math.prod(v for v, _ in best), tuple(x for _, x in best)
    best, arg = 0.0, None
    tab = w.anchors
    for a, lo, hi in K.intervals:
        for pc, u0, u1 in w.overlaps(a, lo, hi):
            v, u = _kind_sup(pc.kind, u0, u1)
            if v > best:
                best, arg = v, tab.canonical(pc.anchor, u)
    return best, arg


# ---------------------------------------------------------------------------
# Translation operator norms
# ---------------------------------------------------------------------------


def m_bound(w: Weight, s, horizon: int = 64) -> MBound:
    """Operator norm ``M(s) = sup_t w(t+s)/w(t)`` of the translation by ``s``."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    _same_space(w, space_of(s))
    if isinstance(w, DiscreteWeight):
        return _m_bound_z(w, s)
    if isinstance(w, ProductWeight):
        parts = [_m_bound_z(f, si) for f, si in zip(w.factors, s)]
        lv = sum(b.log2_value for b in parts)
        return _mbound_from_log2(lv, all(b.certified for b in parts), tuple(b.witness for b in parts))
    return _m_bound_r(w, s, horizon)


def _m_bound_z(w: DiscreteWeight, s: int) -> MBound:
    if s == 0:
        return MBound(1.0, True, 0, 0.0)
    lo, hi = w.window_lo, w.window_hi
    t_left = lo - 1 - max(s, 0)     # t, t+s both in the left tail for t <= t_left
    t_right = hi + 1 + max(-s, 0)   # both in the right tail for t >= t_right
    cands = []
    ts = np.arange(t_left + 1, t_right)
    if ts.size:
        num, den = w.value_array(ts + s), w.value_array(ts)
        ok = np.isfinite(num) & np.isfinite(den) & (num > 0) & (den > 0)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            lr = np.where(ok, np.log2(num / den), w.log2_array(ts + s) - w.log2_array(ts))
        i = int(np.argmax(lr))
        cands.append((float(lr[i]), int(ts[i])))
    left = w.left_tail.expr(t_left + s, -1) - w.left_tail.expr(t_left, -1)
    right = w.right_tail.expr(t_right + s, 1) - w.right_tail.expr(t_right, 1)
    cands.append((left.upper_bound(0), t_left))
    cands.append((right.upper_bound(0), t_right))
    lv, wit = max(cands, key=lambda c: (c[0], -abs(c[1])))
    # exact ratio in linear domain when representable, so that rescaling by powers of 2 is bit-stable
    if wit not in (t_left, t_right) or math.isfinite(lv):
        a, b = w(wit + s), w(wit)
        if 0 < a < INF and 0 < b < INF and abs(math.log2(a / b) - lv) < 1e-9 * max(1.0, abs(lv)):
            return MBound(a / b, True, wit, lv)
    return _mbound_from_log2(lv, True, wit)


def _ratio_candidates(P: _Piece, Q: _Piece, delta: float, v0: float, v1: float):
    """Points of ``[v0, v1]`` where ``Q(v+delta)/P(v)`` can be maximal: ends and the stationary point."""
    pts = [v for v in (v0, v1) if math.isfinite(v)]
    if isinstance(P.kind, Const) and isinstance(Q.kind, Const):
        return pts or [0.0]
    n_p, al_p, be_p = P.kind.logderiv()
    n_q, al_q, be_q = Q.kind.logderiv()
    # n_q * d_p(v) - n_p * d_q(v + delta) = 0 is linear in v
    coef = n_q * be_p - n_p * be_q
    if coef != 0:
        v = (n_p * (al_q + be_q * delta) - n_q * al_p) / coef
        if v0 < v < v1:
            pts.append(v)
    return pts


def _m_bound_r(w: RealWeight, s: RealPoint, horizon: int) -> MBound:
    tab = w.anchors
    pieces = w.pieces(horizon)
    s_pos = tab.position(s.anchor)
    best, arg = -INF, None
    for P in pieces:
        for Q in pieces:
            # t = a_P + v, t + s = a_Q + (v + delta)
            delta = (tab.position(P.anchor) + s_pos - tab.position(Q.anchor)) + s.offset
            v0, v1 = max(P.lo, Q.lo - delta), min(P.hi, Q.hi - delta)
            if not v1 > v0:
                continue
            for v in _ratio_candidates(P, Q, delta, v0, v1):
                r = Q.kind.value(v + delta) / P.kind.value(v)
                if r > best:
                    best, arg = r, tab.canonical(P.anchor, v)
    return MBound(float(best), False, arg, math.log2(best),
                  note=f"sup over anchors <= {horizon}; beyond that the model is taken as default")


# ---------------------------------------------------------------------------
# Admissibility
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdmissibilityReport:
    bounds: tuple
    verdict: str          # "admissible" | "not_admissible" | "inconclusive"
    certified: bool
    horizon: int

    @property
    def all_finite(self) -> bool:
        return all(b.finite for _, b in self.bounds)

    def as_dict(self):
        from .serialize import point_to_json

        return {
            "verdict": self.verdict,
            "certified": self.certified,
            "horizon": self.horizon,
            "bounds": [{"s": point_to_json(s), "value": b.value, "log2_value": b.log2_value,
                        "certified": b.certified} for s, b in self.bounds],
        }


def admissible(w: Weight, S: ShiftSet, horizon: int = 64, max_shifts: int = 256) -> AdmissibilityReport:
    """Check ``M(s) < oo`` for the shifts of ``S`` within ``horizon``.

    On R a bound that keeps doubling as more anchors are modelled is reported
    as numerically divergent (``not_admissible``, uncertified).
    """
    dim = getattr(w, "dim", 1)
    shifts = []
    for s in S.enumerate(w.space, horizon, dim):
        shifts.append(s)
        if len(shifts) >= max_shifts:
            break
    bounds = pmap(lambda s: m_bound(w, s, horizon), shifts)
    pairs = tuple(zip(shifts, bounds))
    if isinstance(w, RealWeight):
        half = max(1, horizon // 2)
        growing = [s for s, b in pairs if b.value >= 2 * m_bound(w, s, half).value and b.value > 2]
        verdict = "not_admissible" if growing else "admissible"
        return AdmissibilityReport(pairs, verdict, False, horizon)
    if any(not b.finite and b.certified for _, b in pairs):
        return AdmissibilityReport(pairs, "not_admissible", True, horizon)
    certified = all(b.certified for _, b in pairs)
    return AdmissibilityReport(pairs, "admissible" if certified else "inconclusive", certified, horizon)


def group_admissible(w: Weight, horizon: int = 64) -> AdmissibilityReport:
    """Admissibility for every translation of the group.

    On Z and Z^d submultiplicativity reduces this to the unit shifts.
    """
    if isinstance(w, DiscreteWeight):
        return admissible(w, ShiftSet.of([1, -1]), horizon)
    if isinstance(w, ProductWeight):
        units = []
        for i in range(w.dim):
            for sgn in (1, -1):
                units.append(tuple(sgn if j == i else 0 for j in range(w.dim)))
        return admissible(w, ShiftSet.of(units), horizon)
    pts = [RealPoint(0, sg * 2.0 ** -j) for j in range(0, 6) for sg in (1, -1)]
    return admissible(w, ShiftSet.of(pts), horizon)


def sublevel_set(w: RealWeight, K: RealUnion, theta: float) -> RealUnion:
    """``{t in K : w(t) <= theta}`` as a finite union of intervals."""
    out = []
    for a, lo, hi in K.intervals:
        for pc, u0, u1 in w.overlaps(a, lo, hi):
            iv = pc.kind.sublevel(u0, u1, theta)
            if iv is not None and iv[1] > iv[0]:
                out.append((pc.anchor, iv[0], iv[1]))
    return RealUnion(_coalesce(out, w.anchors), w.anchors)


def _coalesce(intervals, tab: AnchorTable):
    ivs = sorted(intervals, key=lambda iv: tab.absolute(iv[0], iv[1]))
    out = []
    for a, lo, hi in ivs:
        if out:
            pa, plo, phi = out[-1]
            if tab.rebase(a, lo, pa) <= phi:
                out[-1] = (pa, plo, max(phi, tab.rebase(a, hi, pa)))
                continue
        out.append((a, lo, hi))
    return tuple(out)


def points_in(w: DiscreteWeight, K) -> list:
    return window_points(K)
