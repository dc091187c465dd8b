"""Shift sets S: enumerable subsets of the group used as translation indices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .group import RealPoint, as_point


@dataclass(frozen=True)
class ShiftSet:
    """One of ``all``, ``half_line_pos``, ``half_line_neg``, ``generator``,
    ``list`` or ``arithmetic``.

    ``base`` is the generator / start point, ``step`` the arithmetic step and
    ``points`` the explicit list. On R the open families are sampled on the
    grid ``k * resolution``.
    """

    kind: str
    base: object = None
    step: object = None
    points: tuple = ()
    resolution: float = 0.125

    KINDS = ("all", "half_line_pos", "half_line_neg", "generator", "list", "arithmetic")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown shift set kind {self.kind!r}")
        if self.kind == "generator" and self.base is None:
            raise ValueError("generator shift set needs a base point")
        if self.kind == "arithmetic" and (self.base is None or self.step is None):
            raise ValueError("arithmetic shift set needs base and step")
        if self.kind == "list":
            object.__setattr__(self, "points", tuple(as_point(p) for p in self.points))

    @classmethod
    def all(cls):
        return cls("all")

    @classmethod
    def half_line_pos(cls):
        return cls("half_line_pos")

    @classmethod
    def half_line_neg(cls):
        return cls("half_line_neg")

    @classmethod
    def generator(cls, s0):
        return cls("generator", base=as_point(s0))

    @classmethod
    def of(cls, points):
        return cls("list", points=tuple(points))

    @classmethod
    def arithmetic(cls, a, step):
        return cls("arithmetic", base=as_point(a), step=as_point(step))

    def progressions(self) -> list[tuple[int, int]] | None:
        """Infinite integer progressions ``(start, step)`` covering S on Z."""
        if self.kind == "all":
            return [(0, 1), (-1, -1)]
        if self.kind == "half_line_pos":
            return [(1, 1)]
        if self.kind == "half_line_neg":
            return [(-1, -1)]
        if self.kind == "generator" and isinstance(self.base, int):
            return [(self.base, self.base)] if self.base != 0 else []
        if self.kind == "arithmetic" and isinstance(self.base, int) and isinstance(self.step, int):
            return [(self.base, self.step)] if self.step != 0 else []
        return None

    def enumerate(self, space: str, horizon: int, dim: int = 1) -> Iterator:
        """Points of S with norm at most ``horizon`` in canonical order."""
        if space == "Z":
            yield from self._enum_z(horizon)
        elif space == "Zd":
            yield from self._enum_zd(horizon, dim)
        else:
            yield from self._enum_r(horizon)

    def _enum_z(self, h: int):
        k = self.kind
        if k == "all":
            yield 0
            for n in range(1, h + 1):
                yield n
                yield -n
        elif k == "half_line_pos":
            yield from range(1, h + 1)
        elif k == "half_line_neg":
            yield from range(-1, -h - 1, -1)
        elif k == "generator":
            s0 = self.base
            if s0 == 0:
                yield 0
                return
            n = 1
            while abs(n * s0) <= h:
                yield n * s0
                n += 1
        elif k == "arithmetic":
            a, st = self.base, self.step
            if st == 0:
                if abs(a) <= h:
                    yield a
                return
            v = a
            while not (abs(v) > h and (v > 0) == (st > 0)):
                if abs(v) <= h:
                    yield v
                v += st
        else:
            for p in sorted(self.points, key=lambda p: (abs(p), -p)):
                if abs(p) <= h:
                    yield p

    def _enum_zd(self, h: int, d: int):
        import itertools

        k = self.kind
        if k == "list":
            for p in sorted(self.points, key=lambda p: (max(map(abs, p)), p)):
                if max(map(abs, p)) <= h:
                    yield p
            return
        if k in ("generator", "arithmetic"):
            st = self.base if k == "generator" else self.step
            a = st if k == "generator" else self.base
            if not any(st):
                if max(map(abs, a)) <= h:
                    yield a
                return
            for n in range(0, 2 * h + 2 * max(map(abs, a)) + 2):
                p = tuple(x + n * y for x, y in zip(a, st))
                if max(map(abs, p)) <= h:
                    yield p
            return
        # all / half-lines ordered by sup-norm shell then lexicographically
        for r in range(0, h + 1):
            shell = [p for p in itertools.product(range(-r, r + 1), repeat=d) if max(map(abs, p)) == r]
            for p in sorted(shell):
                if k == "all" or (k == "half_line_pos" and p[0] > 0) or (k == "half_line_neg" and p[0] < 0):
                    yield p

    def _enum_r(self, h: int):
        k = self.kind
        res = self.resolution
        if k == "list":
            yield from self.points
            return
        if k == "all":
            yield RealPoint(0, 0.0)
            for n in range(1, h + 1):
                yield RealPoint(0, n * res)
                yield RealPoint(0, -n * res)
        elif k == "half_line_pos":
            for n in range(1, h + 1):
                yield RealPoint(0, n * res)
        elif k == "half_line_neg":
            for n in range(1, h + 1):
                yield RealPoint(0, -n * res)
        else:
            # generator / arithmetic families on R use origin-anchored points
            st = self.base if k == "generator" else self.step
            a = st if k == "generator" else self.base
            a = a.offset if isinstance(a, RealPoint) else float(a)
            st = st.offset if isinstance(st, RealPoint) else float(st)
            for n in range(h):
                yield RealPoint(0, a + n * st)

    def as_dict(self) -> dict:
        from .serialize import point_to_json

        d: dict = {"kind": self.kind}
        if self.base is not None:
            d["base"] = point_to_json(self.base)
        if self.step is not None:
            d["step"] = point_to_json(self.step)
        if self.kind == "list":
            d["points"] = [point_to_json(p) for p in self.points]
        return d
