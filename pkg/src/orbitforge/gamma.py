"""Scalar sets Gamma and the kernel ``inf_{lam in Gamma} max(|lam| c, d / |lam|)``.

Only magnitudes enter the kernel. A set keeps an informational ``phase``
(radians) so callers can rotate it, but ``objective`` and ``feasible`` never
read it.
"""

from __future__ import annotations

import bisect
import cmath
import math
from dataclasses import dataclass, field, replace

INF = math.inf


@dataclass(frozen=True)
class GammaSet:
    """``kind`` in all, annulus, zero_to_one, one_to_inf, singleton, grid.

    ``r, R`` bound annulus magnitudes; ``value`` is the singleton's complex
    element; ``grid`` holds sorted positive magnitudes.
    """

    kind: str
    r: float = 0.0
    R: float = INF
    value: complex = 1.0
    grid: tuple[float, ...] = ()
    phase: float = field(default=0.0, compare=False)

    KINDS = ("all", "annulus", "zero_to_one", "one_to_inf", "singleton", "grid")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown gamma kind {self.kind!r}")
        if self.kind == "annulus" and not (0 < self.r <= self.R < INF):
            raise ValueError("annulus needs 0 < r <= R < inf")
        if self.kind == "singleton":
            if self.value == 0:
                raise ValueError("singleton gamma must be nonzero")
            # the magnitude is kept apart from the complex value so rotations cannot perturb it
            if self.r == 0.0:
                object.__setattr__(self, "r", abs(complex(self.value)))
        if self.kind == "grid":
            g = tuple(sorted(set(float(x) for x in self.grid)))
            if not g or g[0] <= 0 or not math.isfinite(g[-1]):
                raise ValueError("grid gamma needs positive finite magnitudes")
            object.__setattr__(self, "grid", g)

    # constructors
    @classmethod
    def all(cls):
        return cls("all")

    @classmethod
    def annulus(cls, r, R):
        return cls("annulus", r=float(r), R=float(R))

    @classmethod
    def zero_to_one(cls):
        return cls("zero_to_one")

    @classmethod
    def one_to_inf(cls):
        return cls("one_to_inf")

    @classmethod
    def singleton(cls, lam):
        return cls("singleton", value=complex(lam))

    @classmethod
    def of_grid(cls, mags):
        return cls("grid", grid=tuple(abs(complex(m)) for m in mags))

    def rotate(self, theta: float) -> GammaSet:
        """``e^{i theta} * Gamma``; magnitudes are untouched."""
        if self.kind == "singleton":
            return replace(self, value=self.value * cmath.exp(1j * theta), phase=self.phase + theta)
        return replace(self, phase=self.phase + theta)

    def magnitudes(self) -> GammaSet:
        """``|Gamma|`` as a set of positive reals."""
        if self.kind == "singleton":
            return GammaSet("singleton", value=complex(self.mag0))
        return replace(self, phase=0.0)

    @property
    def mag0(self) -> float:
        return self.r if self.kind == "singleton" else abs(self.value)

    def bounds(self) -> tuple[float, float]:
        """(inf, sup) of the magnitude set."""
        k = self.kind
        if k == "all":
            return 0.0, INF
        if k == "annulus":
            return self.r, self.R
        if k == "zero_to_one":
            return 0.0, 1.0
        if k == "one_to_inf":
            return 1.0, INF
        if k == "singleton":
            return self.mag0, self.mag0
        return self.grid[0], self.grid[-1]

    def contains(self, m: float) -> bool:
        k = self.kind
        if k == "grid":
            return m in self.grid
        if k == "singleton":
            return m == self.mag0
        lo, hi = self.bounds()
        if k in ("all", "zero_to_one"):
            return lo < m <= hi
        return lo <= m <= hi

    def clip(self, m: float) -> float:
        """Magnitude of Gamma nearest to ``m`` in log scale."""
        if self.kind == "grid":
            g = self.grid
            i = bisect.bisect_left(g, m)
            if i == 0:
                return g[0]
            if i == len(g):
                return g[-1]
            return g[i - 1] if math.log(m / g[i - 1]) <= math.log(g[i] / m) else g[i]
        lo, hi = self.bounds()
        return min(max(m, lo), hi) if lo > 0 else min(m, hi)

    def neighbours(self, m: float, ratio: float = math.sqrt(2.0)):
        """Magnitudes walking outward from ``m``: ``m, m*ratio, m/ratio, m*ratio**2, ...``.

        Grids walk over their elements instead, nearest first. Infinite
        generator; callers stop it.
        """
        if self.kind == "grid":
            g = self.grid
            i = bisect.bisect_left(g, m)
            lo, hi = i - 1, i
            while lo >= 0 or hi < len(g):
                dl = math.log(m / g[lo]) if lo >= 0 else INF
                dh = math.log(g[hi] / m) if hi < len(g) else INF
                if dh <= dl:
                    yield g[hi]
                    hi += 1
                else:
                    yield g[lo]
                    lo -= 1
            return
        if self.kind == "singleton":
            yield self.mag0
            return
        lo, hi = self.bounds()
        yield self.clip(m)
        k = 1
        while True:
            up, down = m * ratio ** k, m / ratio ** k
            ok = False
            if up <= hi:
                yield max(up, lo)
                ok = True
            if down >= lo and down > 0:
                yield min(down, hi)
                ok = True
            if not ok:
                return
            k += 1

    def as_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.kind == "annulus":
            d.update(r=self.r, R=self.R)
        elif self.kind == "singleton":
            d["magnitude"] = self.mag0
        elif self.kind == "grid":
            d["grid"] = list(self.grid)
        return d


@dataclass(frozen=True)
class GammaObjective:
    value: float
    argmin: float      # magnitude; 0.0 or inf mark a limit
    attained: bool


def _pair(lam: float, c: float, d: float) -> float:
    return max(lam * c, d / lam)


def objective(c: float, d: float, gamma: GammaSet) -> GammaObjective:
    """``inf over lam in |Gamma| of max(lam*c, d/lam)`` in closed form."""
    if c < 0 or d < 0:
        raise ValueError("c and d must be nonnegative")
    k = gamma.kind
    if k == "singleton":
        m = gamma.mag0
        return GammaObjective(_pair(m, c, d), m, True)
    if k == "grid":
        best = min(gamma.grid, key=lambda m: (_pair(m, c, d), m))
        return GammaObjective(_pair(best, c, d), best, True)
    lo, hi = gamma.bounds()
    if c == 0 and d == 0:
        m = gamma.clip(1.0)
        return GammaObjective(0.0, m, True)
    if c == 0:
        # d / lam decreases in lam
        if hi == INF:
            return GammaObjective(0.0, INF, False)
        return GammaObjective(d / hi, hi, True)
    if d == 0:
        if lo == 0:
            return GammaObjective(0.0, 0.0, False)
        return GammaObjective(lo * c, lo, True)
    star = math.sqrt(d) / math.sqrt(c)
    m = min(max(star, lo), hi)
    if m == star:
        return GammaObjective(math.sqrt(c) * math.sqrt(d), m, True)
    return GammaObjective(_pair(m, c, d), m, True)


def feasible(c: float, d: float, eps: float, gamma: GammaSet) -> tuple[bool, float | None]:
    """Is there ``lam`` in ``|Gamma|`` with ``lam*c < eps`` and ``d/lam < eps``?

    Returns the verdict and a witness magnitude. The open window for ``lam``
    is ``(d/eps, eps/c)``; the witness is its geometric midpoint clipped into
    Gamma, or the grid element nearest to it.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if c < 0 or d < 0:
        raise ValueError("c and d must be nonnegative")
    a = d / eps
    b = eps / c if c > 0 else INF
    if not a < b:
        return False, None
    if a > 0 and b < INF:
        mid = math.sqrt(a) * math.sqrt(b)
    elif a > 0:
        mid = 2.0 * a
    elif b < INF:
        mid = 0.5 * b
    else:
        mid = 1.0
    k = gamma.kind
    if k == "grid":
        i = bisect.bisect_right(gamma.grid, a)
        cands = [m for m in gamma.grid[i:] if m < b]
        if not cands:
            return False, None
        return True, min(cands, key=lambda m: (abs(math.log(m / mid)), m))
    if k == "singleton":
        m = gamma.mag0
        return (a < m < b), (m if a < m < b else None)
    lo, hi = gamma.bounds()
    lo_open = k in ("all", "zero_to_one")
    # intersect (a, b) with the magnitude interval
    left = max(a, lo)
    right = min(b, hi)
    if left > right or (left == right and (left == a or left == b or (left == lo and lo_open))):
        return False, None
    if left == right:
        return True, left
    m = min(max(mid, left), right)
    if m == a or m == b or (m == lo and lo_open):
        m = math.sqrt(left * right) if left > 0 and right < INF else (2 * left if left > 0 else 0.5 * right)
    return (a < m < b and gamma.contains(m)), m if (a < m < b and gamma.contains(m)) else None
