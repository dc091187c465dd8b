"""Group elements, windows and finitely supported vectors.

Three ambient spaces are supported, all abelian and written additively:

* ``"Z"``  -- points are plain ``int``;
* ``"Zd"`` -- points are ``tuple`` of ``int`` of a fixed length d;
* ``"R"``  -- points are :class:`RealPoint`, an offset from an exact integer
  anchor of an :class:`AnchorTable`.

Real-line coordinates are kept anchor-local so that a point such as
``a_12 + 2**-12`` with ``a_12 = 12!`` keeps the full precision of its offset.
Whenever two real points are compared, the integer anchor positions are
subtracted exactly first and only the (small) remainder is a float.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Iterable, Union


class SpaceMismatch(ValueError):
    """Objects from different ambient spaces were combined."""


# ---------------------------------------------------------------------------
# Anchors and points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnchorTable:
    """Strictly increasing exact integer anchor positions, ``positions[0] == 0``."""

    positions: tuple[int, ...] = (0,)

    def __post_init__(self):
        pos = tuple(int(p) for p in self.positions)
        object.__setattr__(self, "positions", pos)
        if not pos or pos[0] != 0:
            raise ValueError("anchor table must start with the origin anchor 0")
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise ValueError("anchor positions must be strictly increasing")

    @classmethod
    def factorial(cls, n_max: int) -> AnchorTable:
        """Anchors ``0, 1!, 2!, ..., n_max!`` so that anchor id ``n`` sits at ``n!``."""
        return cls((0,) + tuple(math.factorial(n) for n in range(1, n_max + 1)))

    def __len__(self):
        return len(self.positions)

    def position(self, anchor: int) -> int:
        return self.positions[anchor]

    def nearest(self, x: float) -> int:
        """Anchor id nearest to the (approximate) absolute coordinate ``x``; ties go low."""
        pos = self.positions
        i = bisect.bisect_left(pos, x)
        if i == 0:
            return 0
        if i >= len(pos):
            return len(pos) - 1
        return i - 1 if x - pos[i - 1] <= pos[i] - x else i

    def rebase(self, anchor: int, offset: float, target: int) -> float:
        """Offset of the point ``(anchor, offset)`` measured from anchor ``target``."""
        return (self.positions[anchor] - self.positions[target]) + offset

    def absolute(self, anchor: int, offset: float) -> float:
        return self.positions[anchor] + offset

    def canonical(self, anchor: int, offset: float) -> RealPoint:
        c = self.nearest(self.positions[anchor] + offset)
        return RealPoint(c, self.rebase(anchor, offset, c))


@dataclass(frozen=True, order=True)
class RealPoint:
    """The real number ``anchors.positions[anchor] + offset``."""

    anchor: int
    offset: float

    def __post_init__(self):
        if not math.isfinite(self.offset):
            raise ValueError("real point offset must be finite")
        if self.anchor < 0:
            raise ValueError("anchor id must be non-negative")


Point = Union[int, tuple, RealPoint]


def space_of(point) -> str:
    if isinstance(point, RealPoint):
        return "R"
    if isinstance(point, tuple):
        return "Zd"
    if isinstance(point, (int,)) and not isinstance(point, bool):
        return "Z"
    if hasattr(point, "__index__"):
        return "Z"
    raise TypeError(f"not a group point: {point!r}")


def as_point(value) -> Point:
    """Normalise numpy integers and lists into canonical point objects."""
    if isinstance(value, RealPoint):
        return value
    if isinstance(value, (tuple, list)):
        return tuple(int(v) for v in value)
    return int(value)


def identity(space: str, dim: int = 1) -> Point:
    if space == "Z":
        return 0
    if space == "Zd":
        return (0,) * dim
    return RealPoint(0, 0.0)


def add_points(a: Point, b: Point, anchors: AnchorTable | None = None) -> Point:
    sa, sb = space_of(a), space_of(b)
    if sa != sb:
        raise SpaceMismatch(f"cannot add {sa} point to {sb} point")
    if sa == "Z":
        return a + b
    if sa == "Zd":
        if len(a) != len(b):
            raise SpaceMismatch("dimension mismatch")
        return tuple(x + y for x, y in zip(a, b))
    anchors = anchors or AnchorTable()
    base = anchors.position(a.anchor) + anchors.position(b.anchor)
    off = a.offset + b.offset
    c = anchors.nearest(base + off)
    return RealPoint(c, (base - anchors.position(c)) + off)


def neg_point(a: Point, anchors: AnchorTable | None = None) -> Point:
    s = space_of(a)
    if s == "Z":
        return -a
    if s == "Zd":
        return tuple(-x for x in a)
    anchors = anchors or AnchorTable()
    base = -anchors.position(a.anchor)
    c = anchors.nearest(base - a.offset)
    return RealPoint(c, (base - anchors.position(c)) - a.offset)


def point_key(p: Point, anchors: AnchorTable | None = None):
    """Sort key giving the canonical order of points of one space."""
    if isinstance(p, RealPoint):
        anchors = anchors or AnchorTable()
        return anchors.absolute(p.anchor, p.offset)
    return p


# ---------------------------------------------------------------------------
# Windows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmptyWindow:
    space: str = "Z"
    dim: int = 1


@dataclass(frozen=True)
class IntInterval:
    lo: int
    hi: int

    def __post_init__(self):
        object.__setattr__(self, "lo", int(self.lo))
        object.__setattr__(self, "hi", int(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty integer interval [{self.lo}, {self.hi}]; use EmptyWindow")

    space = "Z"

    def points(self):
        return range(self.lo, self.hi + 1)


@dataclass(frozen=True)
class PointSet:
    """Finite subset of Z (produced by subset selection)."""

    points: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(sorted(set(int(p) for p in self.points))))

    space = "Z"


@dataclass(frozen=True)
class IntBox:
    lo: tuple[int, ...]
    hi: tuple[int, ...]

    def __post_init__(self):
        lo, hi = tuple(int(v) for v in self.lo), tuple(int(v) for v in self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if len(lo) != len(hi) or not lo:
            raise ValueError("box bounds must have the same positive length")
        if any(a > b for a, b in zip(lo, hi)):
            raise ValueError("box lo must not exceed hi on any axis")

    space = "Zd"

    @property
    def dim(self):
        return len(self.lo)


@dataclass(frozen=True)
class RealUnion:
    """Finite union of closed intervals ``[pos[a] + lo, pos[a] + hi]``.

    Intervals are stored canonically: re-anchored at the anchor nearest to
    their left endpoint, sorted, and required not to overlap in measure.
    """

    intervals: tuple[tuple[int, float, float], ...]
    anchors: AnchorTable = field(default_factory=AnchorTable)

    def __post_init__(self):
        tab = self.anchors
        canon = []
        for a, lo, hi in self.intervals:
            lo, hi = float(lo), float(hi)
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
                raise ValueError(f"bad real interval ({a}, {lo}, {hi})")
            if lo == hi:
                continue
            c = tab.nearest(tab.absolute(a, lo))
            canon.append((c, tab.rebase(a, lo, c), tab.rebase(a, hi, c)))
        canon.sort(key=lambda iv: tab.absolute(iv[0], iv[1]))
        for (a1, _, h1), (a2, l2, _) in zip(canon, canon[1:]):
            if tab.rebase(a1, h1, a2) > l2:
                raise ValueError("real intervals must be pairwise disjoint")
        object.__setattr__(self, "intervals", tuple(canon))

    space = "R"


Window = Union[EmptyWindow, IntInterval, PointSet, IntBox, RealUnion]


def window_space(K) -> str:
    return K.space


def _check_same(*spaces):
    if len(set(spaces)) > 1:
        raise SpaceMismatch(f"ambient spaces differ: {spaces}")


def measure(K) -> float:
    """Counting measure on Z and Z^d, total length on R."""
    if isinstance(K, EmptyWindow):
        return 0.0 if K.space == "R" else 0
    if isinstance(K, IntInterval):
        return K.hi - K.lo + 1
    if isinstance(K, PointSet):
        return len(K.points)
    if isinstance(K, IntBox):
        return math.prod(h - l + 1 for l, h in zip(K.lo, K.hi))
    return math.fsum(hi - lo for _, lo, hi in K.intervals)


def shift_window(K, s: Point):
    """The translate ``s + K``."""
    sp = space_of(s)
    if isinstance(K, EmptyWindow):
        _check_same(K.space, sp)
        return K
    _check_same(K.space, sp)
    if isinstance(K, IntInterval):
        return IntInterval(K.lo + s, K.hi + s)
    if isinstance(K, PointSet):
        return PointSet(tuple(p + s for p in K.points))
    if isinstance(K, IntBox):
        if len(s) != K.dim:
            raise SpaceMismatch("dimension mismatch")
        return IntBox(tuple(l + x for l, x in zip(K.lo, s)), tuple(h + x for h, x in zip(K.hi, s)))
    tab = K.anchors
    out = []
    for a, lo, hi in K.intervals:
        p = add_points(RealPoint(a, lo), s, tab)
        out.append((p.anchor, p.offset, p.offset + (hi - lo)))
    return RealUnion(tuple(out), tab)


def window_points(K) -> list:
    """Enumerate the points of a discrete window in canonical order."""
    if isinstance(K, EmptyWindow):
        return []
    if isinstance(K, IntInterval):
        return list(K.points())
    if isinstance(K, PointSet):
        return list(K.points)
    if isinstance(K, IntBox):
        import itertools

        return [tuple(p) for p in itertools.product(*(range(l, h + 1) for l, h in zip(K.lo, K.hi)))]
    raise TypeError("real windows have no point enumeration")


def _real_overlap(K1: RealUnion, K2: RealUnion) -> float:
    return measure(intersect_real(K1, K2))


def intersect_real(K1: RealUnion, K2: RealUnion) -> RealUnion:
    tab = K1.anchors
    out = []
    for a1, l1, h1 in K1.intervals:
        for a2, l2, h2 in K2.intervals:
            # both endpoints expressed relative to anchor a1
            lo2, hi2 = tab.rebase(a2, l2, a1), tab.rebase(a2, h2, a1)
            lo, hi = max(l1, lo2), min(h1, hi2)
            if hi > lo:
                out.append((a1, lo, hi))
    return RealUnion(tuple(out), tab)


def disjoint(K1, K2) -> bool:
    """True when ``K1`` and ``K2`` do not intersect (in measure on R)."""
    if isinstance(K1, EmptyWindow) or isinstance(K2, EmptyWindow):
        _check_same(K1.space, K2.space)
        return True
    _check_same(K1.space, K2.space)
    if isinstance(K1, IntInterval) and isinstance(K2, IntInterval):
        return K1.hi < K2.lo or K2.hi < K1.lo
    if isinstance(K1, IntBox) and isinstance(K2, IntBox):
        if K1.dim != K2.dim:
            raise SpaceMismatch("dimension mismatch")
        return any(h1 < l2 or h2 < l1 for l1, h1, l2, h2 in zip(K1.lo, K1.hi, K2.lo, K2.hi))
    if K1.space == "Z":
        return not (set(window_points(K1)) & set(window_points(K2)))
    return _real_overlap(K1, K2) == 0.0


def window_hull(windows: Iterable) -> object:
    """Smallest interval / box containing all given discrete windows."""
    ws = [w for w in windows if not isinstance(w, EmptyWindow)]
    if not ws:
        return EmptyWindow()
    if isinstance(ws[0], IntBox):
        d = ws[0].dim
        return IntBox(tuple(min(w.lo[i] for w in ws) for i in range(d)),
                      tuple(max(w.hi[i] for w in ws) for i in range(d)))
    pts = [p for w in ws for p in window_points(w)] if any(isinstance(w, PointSet) for w in ws) else None
    if pts is not None:
        return IntInterval(min(pts), max(pts))
    return IntInterval(min(w.lo for w in ws), max(w.hi for w in ws))


# ---------------------------------------------------------------------------
# Finitely supported vectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteVec:
    """Finitely supported function on Z or Z^d with nonzero complex coefficients."""

    space: str
    entries: tuple[tuple[Point, complex], ...] = ()
    dim: int = 1

    def __post_init__(self):
        if self.space not in ("Z", "Zd"):
            raise ValueError(f"discrete vectors live on Z or Zd, not {self.space}")
        acc: dict = {}
        for p, c in self.entries:
            p = as_point(p)
            if space_of(p) != self.space:
                raise SpaceMismatch(f"point {p!r} is not in {self.space}")
            if self.space == "Zd" and len(p) != self.dim:
                raise SpaceMismatch("dimension mismatch")
            acc[p] = acc.get(p, 0j) + complex(c)
        items = tuple(sorted(((p, c) for p, c in acc.items() if c != 0)))
        object.__setattr__(self, "entries", items)

    @classmethod
    def from_dict(cls, d: dict, space: str = "Z", dim: int = 1) -> DiscreteVec:
        return cls(space, tuple(d.items()), dim)

    def as_dict(self) -> dict:
        return dict(self.entries)

    def support(self) -> list:
        return [p for p, _ in self.entries]

    def sup_abs(self) -> float:
        return max((abs(c) for _, c in self.entries), default=0.0)

    def is_zero(self) -> bool:
        return not self.entries

    def scale(self, lam: complex) -> DiscreteVec:
        return DiscreteVec(self.space, tuple((p, lam * c) for p, c in self.entries), self.dim)

    def __add__(self, other: DiscreteVec) -> DiscreteVec:
        if not isinstance(other, DiscreteVec) or other.space != self.space or other.dim != self.dim:
            raise SpaceMismatch("cannot add vectors from different spaces")
        return DiscreteVec(self.space, self.entries + other.entries, self.dim)

    def __sub__(self, other: DiscreteVec) -> DiscreteVec:
        return self + other.scale(-1)


@dataclass(frozen=True)
class StepVec:
    """Finite step function on R: pieces ``(anchor, lo, hi, coeff)``, pairwise disjoint."""

    pieces: tuple[tuple[int, float, float, complex], ...] = ()
    anchors: AnchorTable = field(default_factory=AnchorTable)

    space = "R"

    def __post_init__(self):
        tab = self.anchors
        canon = []
        for a, lo, hi, c in self.pieces:
            c = complex(c)
            if c == 0 or lo == hi:
                continue
            if lo > hi:
                raise ValueError("step piece with lo > hi")
            n = tab.nearest(tab.absolute(a, lo))
            canon.append((n, tab.rebase(a, lo, n), tab.rebase(a, hi, n), c))
        canon.sort(key=lambda pc: tab.absolute(pc[0], pc[1]))
        for (a1, _, h1, _), (a2, l2, _, _) in zip(canon, canon[1:]):
            if tab.rebase(a1, h1, a2) > l2:
                raise ValueError("step pieces must be pairwise disjoint")
        object.__setattr__(self, "pieces", tuple(canon))

    def support(self) -> RealUnion:
        return RealUnion(tuple((a, lo, hi) for a, lo, hi, _ in self.pieces), self.anchors)

    def sup_abs(self) -> float:
        return max((abs(c) for *_, c in self.pieces), default=0.0)

    def is_zero(self) -> bool:
        return not self.pieces

    def scale(self, lam: complex) -> StepVec:
        return StepVec(tuple((a, lo, hi, lam * c) for a, lo, hi, c in self.pieces), self.anchors)

    def __add__(self, other: StepVec) -> StepVec:
        if not isinstance(other, StepVec):
            raise SpaceMismatch("cannot add a step function to a discrete vector")
        if other.anchors != self.anchors:
            raise SpaceMismatch("step functions use different anchor tables")
        return StepVec(_merge_steps(self.pieces + other.pieces, self.anchors), self.anchors)

    def __sub__(self, other: StepVec) -> StepVec:
        return self + other.scale(-1)


def _merge_steps(pieces, tab: AnchorTable):
    """Sum possibly overlapping step pieces into disjoint pieces."""
    if not pieces:
        return ()
    # breakpoints canonicalised to their nearest anchor so equal points compare equal
    bps = set()
    for a, lo, hi, _ in pieces:
        for off in (lo, hi):
            p = tab.canonical(a, off)
            bps.add((p.anchor, p.offset))
    pts = sorted(bps, key=lambda p: (tab.absolute(*p), p))
    # drop duplicates that differ only by representation
    uniq = [pts[0]]
    for p in pts[1:]:
        if tab.rebase(p[0], p[1], uniq[-1][0]) != uniq[-1][1]:
            uniq.append(p)
    out = []
    for (a0, o0), (a1, o1) in zip(uniq, uniq[1:]):
        hi = tab.rebase(a1, o1, a0)
        mid = 0.5 * (o0 + hi)
        c = 0j
        for a, lo, phi, coeff in pieces:
            m = tab.rebase(a0, mid, a)
            if lo < m < phi:
                c += coeff
        if c != 0:
            out.append((a0, o0, hi, c))
    return tuple(out)


SupportedVec = Union[DiscreteVec, StepVec]


def vec_space(f) -> str:
    return f.space


def translate(f, s: Point):
    """``(T_s f)(t) = f(t - s)``: the support moves by ``+s``, coefficients unchanged."""
    sp = space_of(s)
    if f.space != sp:
        raise SpaceMismatch(f"cannot translate a {f.space} vector by a {sp} point")
    if isinstance(f, DiscreteVec):
        if f.space == "Zd" and len(s) != f.dim:
            raise SpaceMismatch("dimension mismatch")
        return DiscreteVec(f.space, tuple((add_points(p, s), c) for p, c in f.entries), f.dim)
    tab = f.anchors
    out = []
    for a, lo, hi, c in f.pieces:
        p = add_points(RealPoint(a, lo), s, tab)
        out.append((p.anchor, p.offset, p.offset + (hi - lo), c))
    return StepVec(tuple(out), tab)


def indicator(K, coeff: complex = 1.0):
    """``coeff`` times the indicator function of the window ``K``."""
    if isinstance(K, EmptyWindow):
        if K.space == "R":
            return StepVec()
        return DiscreteVec(K.space, (), K.dim)
    if isinstance(K, RealUnion):
        return StepVec(tuple((a, lo, hi, coeff) for a, lo, hi in K.intervals), K.anchors)
    if isinstance(K, IntBox):
        return DiscreteVec("Zd", tuple((p, coeff) for p in window_points(K)), K.dim)
    return DiscreteVec("Z", tuple((p, coeff) for p in window_points(K)))


def delta(point: Point, coeff: complex = 1.0):
    """Point mass on Z or Z^d."""
    point = as_point(point)
    sp = space_of(point)
    return DiscreteVec(sp, ((point, coeff),), len(point) if sp == "Zd" else 1)
