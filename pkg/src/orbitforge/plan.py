"""Synthesis plan data: the sequence of shifts, scalars and windows."""

from __future__ import annotations

from dataclasses import dataclass, field

from .gamma import GammaSet
from .group import EmptyWindow, identity


@dataclass(frozen=True)
class PlanStep:
    """Step ``n``: shift ``s``, magnitude ``lam``, window ``F``, target budget ``alpha``.

    ``values`` holds the three budget quantities (own-window term, new-on-old
    cross terms, old-on-new cross terms); each is below ``2**-n`` and
    ``margins`` are the differences.
    """

    n: int
    s: object
    lam: float
    F: object
    alpha: float = 1.0
    values: tuple[float, float, float] = (0.0, 0.0, 0.0)

    @property
    def margins(self) -> tuple[float, float, float]:
        b = 2.0 ** -self.n
        return tuple(b - v for v in self.values)


@dataclass(frozen=True)
class SynthesisPlan:
    space: str
    p: float
    gamma: GammaSet
    steps: tuple[PlanStep, ...]
    dim: int = 1
    notes: tuple[str, ...] = field(default=(), compare=False)

    def with_origin(self) -> tuple[PlanStep, ...]:
        """Steps prefixed by step 0: identity shift, magnitude 1, empty window."""
        s0 = identity(self.space, self.dim)
        return (PlanStep(0, s0, 1.0, EmptyWindow(self.space, self.dim)),) + self.steps

    def __len__(self):
        return len(self.steps)

    def truncated(self, n: int) -> SynthesisPlan:
        return SynthesisPlan(self.space, self.p, self.gamma, self.steps[:n], self.dim, self.notes)


@dataclass(frozen=True)
class GreedyInconclusive:
    """Greedy construction stopped at ``step``; ``best`` is the smallest violation seen."""

    step: int
    best: float
    partial: SynthesisPlan
    reason: str = ""
