"""Closed-form asymptotics of log-weights along an arithmetic progression.

Along ``n = n0 + sigma * k`` (``k = 0, 1, 2, ...``) each certified tail model
of a discrete weight has a base-2 logarithm of the form

    const + slope * k + sum_i coeff_i * 2 ** (rate_i * k)

and so does every sum or difference of such logs. Every term is monotone in
``k``; terms of equal rate are merged, which makes term-wise infima/suprema
sharp for the cases that occur in practice (one exponential rate per
functional). The limit as ``k -> oo`` is decided exactly by the dominant term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INF = math.inf


@dataclass(frozen=True)
class TailExpr:
    const: float = 0.0
    slope: float = 0.0
    exps: tuple[tuple[float, float], ...] = ()  # (rate, coeff), rate != 0, coeff != 0

    def __post_init__(self):
        merged: dict[float, float] = {}
        const = float(self.const)
        for rate, coeff in self.exps:
            rate, coeff = float(rate), float(coeff)
            if rate == 0.0:
                const += coeff
                continue
            merged[rate] = merged.get(rate, 0.0) + coeff
        exps = tuple(sorted((r, c) for r, c in merged.items() if c != 0.0))
        object.__setattr__(self, "const", const)
        object.__setattr__(self, "slope", float(self.slope))
        object.__setattr__(self, "exps", exps)

    def __add__(self, other: TailExpr) -> TailExpr:
        return TailExpr(self.const + other.const, self.slope + other.slope, self.exps + other.exps)

    def __neg__(self) -> TailExpr:
        return self.scale(-1.0)

    def __sub__(self, other: TailExpr) -> TailExpr:
        return self + (-other)

    def scale(self, c: float) -> TailExpr:
        return TailExpr(c * self.const, c * self.slope, tuple((r, c * a) for r, a in self.exps))

    def shift_const(self, c: float) -> TailExpr:
        return TailExpr(self.const + c, self.slope, self.exps)

    def __call__(self, k):
        k = np.asarray(k, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            out = self.const + self.slope * k
            for rate, coeff in self.exps:
                out = out + coeff * np.exp2(rate * k)
        return out

    def limit(self) -> float:
        """Exact limit as ``k -> oo`` (may be +-inf)."""
        growing = [(r, c) for r, c in self.exps if r > 0]
        if growing:
            return math.copysign(INF, max(growing)[1])
        if self.slope != 0.0:
            return math.copysign(INF, self.slope)
        return self.const

    def lower_bound(self, k0: float) -> float:
        """A lower bound for ``inf_{k >= k0}``; exact when every term is monotone alike."""
        lb = self.const + (self.slope * k0 if self.slope >= 0 else -INF)
        for rate, coeff in self.exps:
            at = coeff * 2.0 ** min(rate * k0, 1023.0)
            if rate > 0:
                lb += at if coeff > 0 else -INF
            else:
                lb += 0.0 if coeff > 0 else at
        return lb

    def upper_bound(self, k0: float) -> float:
        return -(-self).lower_bound(k0)

    def as_dict(self) -> dict:
        return {"const": self.const, "slope": self.slope,
                "exps": [{"rate": r, "coeff": c} for r, c in self.exps]}
