"""Density criteria, orbit approximation and dense-vector synthesis for weighted translation operators."""

__version__ = "0.1.0"

from .approx import ApproxResult, best_approx, best_lambda, brute_oracle, continuity_probe
from .criteria import (
    CriterionReport,
    Verdict,
    default_schedule,
    greedy_plan,
    pointwise_gamma_criterion,
    revalidate,
    salas_hypercyclic,
    salas_supercyclic,
    theorem_a_series,
    theorem_b_check,
)
from .gamma import GammaSet, feasible, objective
from .group import AnchorTable, DiscreteVec, IntBox, IntInterval, PointSet, RealPoint, RealUnion, StepVec, translate
from .plan import GreedyInconclusive, PlanStep, SynthesisPlan
from .serialize import SpecError
from .shifts import ShiftSet
from .synthesis import DenseVectorCandidate, TargetStream, build_vector, certify, synthesize
from .weights import (
    DiscreteWeight,
    ProductWeight,
    RealWeight,
    admissible,
    group_admissible,
    local_norm,
    m_bound,
    weighted_norm,
)
