"""Truncated dense-vector candidates built from greedy plans, with error certificates.

A candidate component is ``f = sum_k translate(g_k, -s_k) / lam_k`` over the
plan steps ``k <= truncation``. Because the placed windows ``F_k - s_k`` are
pairwise disjoint, ``lam_n * translate(f, s_n) - g_n`` splits into disjoint
pieces and its p-th power norm is at most the certificate ``B_n**p``
computed from plan data alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .criteria import greedy_plan
from .gamma import GammaSet
from .group import DiscreteVec, IntBox, IntInterval, neg_point, shift_window, translate, window_points
from .plan import GreedyInconclusive, PlanStep, SynthesisPlan
from .shifts import ShiftSet
from .weights import local_norm_p, weighted_norm_p

__all__ = [
    "TargetStream", "DenseVectorCandidate", "SynthesisPlan", "PlanStep", "GreedyInconclusive",
    "enumerate_targets", "build_vector", "certify", "synthesize", "measured_error_p",
]


def cantor_unpair(k: int) -> tuple[int, int]:
    w = (math.isqrt(8 * k + 1) - 1) // 2
    y = k - w * (w + 1) // 2
    return w - y, y


@dataclass(frozen=True)
class TargetStream:
    """Deterministic stream of ``width``-tuples of dyadic vectors.

    Stream index ``k`` (0-based) maps through the inverse Cantor pairing to a
    base index ``b``; every base index recurs on every later diagonal. Base
    ``b`` has level ``l = floor(log2(b+1))``: support radius ``l`` and
    coefficients ``j / 2**(depth+l)`` with ``|j| <= (l+1) * 2**(depth+l)``,
    drawn from a PCG64 generator seeded with ``(seed, b)``. Base 0 is the unit
    point mass at the origin.
    """

    width: int = 1
    depth: int = 1
    seed: int = 0
    space: str = "Z"
    dim: int = 1

    def __post_init__(self):
        if self.width < 1 or self.depth < 0:
            raise ValueError("width must be >= 1 and depth >= 0")
        if self.space not in ("Z", "Zd"):
            raise ValueError("targets are generated on Z or Z^d only")

    def base_index(self, k: int) -> int:
        return cantor_unpair(k)[1]

    @staticmethod
    def level(b: int) -> int:
        return (b + 1).bit_length() - 1

    def radius(self, k: int) -> int:
        return self.level(self.base_index(k))

    def window(self, k: int):
        """``F_k``: centred interval (box) of the running maximum radius."""
        r = max(self.radius(j) for j in range(k + 1))
        if self.space == "Z":
            return IntInterval(-r, r)
        return IntBox((-r,) * self.dim, (r,) * self.dim)

    def windows(self, n: int) -> list:
        out, r = [], 0
        for k in range(n):
            r = max(r, self.radius(k))
            out.append(IntInterval(-r, r) if self.space == "Z" else IntBox((-r,) * self.dim, (r,) * self.dim))
        return out

    def _base_target(self, b: int) -> tuple:
        zero = 0 if self.space == "Z" else (0,) * self.dim
        if b == 0:
            return tuple(DiscreteVec(self.space, ((zero, 1.0),), self.dim) for _ in range(self.width))
        lev = self.level(b)
        den = 2 ** (self.depth + lev)
        rng = np.random.Generator(np.random.PCG64([self.seed, b]))
        pts = window_points(IntInterval(-lev, lev) if self.space == "Z" else IntBox((-lev,) * self.dim, (lev,) * self.dim))
        out = []
        for _ in range(self.width):
            nums = rng.integers(-(lev + 1) * den, (lev + 1) * den + 1, size=(len(pts), 2))
            if not nums.any():
                nums[len(pts) // 2, 0] = 1
            ents = tuple((p, complex(int(a), int(c)) / den) for p, (a, c) in zip(pts, nums))
            out.append(DiscreteVec(self.space, ents, self.dim))
        return tuple(out)

    def target(self, k: int) -> tuple:
        return self._base_target(self.base_index(k))

    def alpha(self, k: int, p: float) -> float:
        """``max`` over components of ``sup|g|**p``."""
        return max(g.sup_abs() for g in self.target(k)) ** p

    def alphas(self, n: int, p: float) -> list[float]:
        return [self.alpha(k, p) for k in range(n)]

    def as_dict(self) -> dict:
        return {"width": self.width, "depth": self.depth, "seed": self.seed, "space": self.space, "dim": self.dim}


def enumerate_targets(width: int = 1, depth: int = 1, seed: int = 0, space: str = "Z", dim: int = 1) -> TargetStream:
    return TargetStream(width, depth, seed, space, dim)


@dataclass(frozen=True)
class DenseVectorCandidate:
    components: tuple
    plan: SynthesisPlan
    truncation: int
    certificates: tuple[tuple[int, float], ...]
    norm_bound_p: float
    targets: TargetStream

    def bound(self, n: int) -> float:
        return dict(self.certificates)[n]


def _check(plan: SynthesisPlan, targets: TargetStream, truncation: int):
    if truncation < 0 or truncation > len(plan):
        raise ValueError(f"truncation {truncation} exceeds the {len(plan)} plan steps")
    if plan.space != targets.space:
        from .group import SpaceMismatch

        raise SpaceMismatch("plan and targets live on different spaces")
    for st in plan.steps[:truncation]:
        for g in targets.target(st.n - 1):
            for q in g.support():
                if not _in_window(q, st.F):
                    raise ValueError(f"target {st.n} is not supported in its plan window")


def _in_window(q, F) -> bool:
    if isinstance(F, IntInterval):
        return F.lo <= q <= F.hi
    if isinstance(F, IntBox):
        return all(l <= x <= h for x, l, h in zip(q, F.lo, F.hi))
    return q in window_points(F)


def build_vector(plan: SynthesisPlan, targets: TargetStream, truncation: int, w=None) -> DenseVectorCandidate:
    """Sum the truncated series for each component; plan step ``n`` uses stream index ``n - 1``.

    With a weight ``w`` the certificates and the norm budget are filled in.
    """
    _check(plan, targets, truncation)
    comps = []
    for j in range(targets.width):
        acc = {}
        for st in plan.steps[:truncation]:
            g = targets.target(st.n - 1)[j]
            for q, c in translate(g, neg_point(st.s)).entries:
                acc[q] = acc.get(q, 0) + c / st.lam
        comps.append(DiscreteVec(plan.space, tuple(acc.items()), plan.dim))
    cand = DenseVectorCandidate(tuple(comps), plan, truncation, (), math.nan, targets)
    if w is None:
        return cand
    certs = tuple((n, certify(cand, n, w)) for n in range(1, truncation + 1))
    nb = math.fsum(st.alpha * local_norm_p(w, shift_window(st.F, neg_point(st.s)), plan.p) / st.lam ** plan.p
                   for st in plan.steps[:truncation])
    return DenseVectorCandidate(cand.components, plan, truncation, certs, nb, targets)


def certify(candidate: DenseVectorCandidate, n: int, w) -> float:
    """``B_n`` with ``B_n**p = sum_{k != n} alpha_k (lam_n/lam_k)**p ||w||^p(F_k + s_n - s_k)``."""
    if not 1 <= n <= candidate.truncation:
        raise ValueError("target index out of range")
    plan = candidate.plan
    p = plan.p
    steps = plan.steps[: candidate.truncation]
    sn = steps[n - 1]
    terms = []
    for st in steps:
        if st.n == n:
            continue
        K = shift_window(shift_window(st.F, sn.s), neg_point(st.s))
        terms.append(st.alpha * (sn.lam / st.lam) ** p * local_norm_p(w, K, p))
    return math.fsum(terms) ** (1 / p)


def synthesize(w, S: ShiftSet, gamma: GammaSet, p: float, steps: int, truncation: int,
               targets: TargetStream | None = None, horizon: int = 4096):
    """Greedy plan for the stream windows followed by the truncated candidate."""
    targets = targets or TargetStream(space=w.space, dim=getattr(w, "dim", 1))
    plan = greedy_plan(w, S, gamma, p, targets.windows(steps), horizon, alphas=targets.alphas(steps, p))
    if isinstance(plan, GreedyInconclusive):
        return plan
    return build_vector(plan, targets, min(truncation, len(plan)), w)


def measured_error_p(candidate: DenseVectorCandidate, n: int, w, component: int = 0) -> float:
    """``||lam_n translate(f, s_n) - g_n||**p`` evaluated directly."""
    st = candidate.plan.steps[n - 1]
    f = candidate.components[component]
    g = candidate.targets.target(n - 1)[component]
    return weighted_norm_p(translate(f, st.s).scale(st.lam) - g, w, candidate.plan.p)
