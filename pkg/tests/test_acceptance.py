"""Acceptance criteria 1-9; each prints one PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) or through pytest, which
repeats the lines in its terminal summary.
"""

import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from scipy.integrate import quad

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES
from helpers import random_weight
from orbitforge.approx import best_lambda, brute_oracle, orbit_error
from orbitforge.criteria import (
    FAILS_CERTIFIED,
    HOLDS_CERTIFIED,
    default_schedule,
    log2_objective,
    pointwise_gamma_criterion,
    revalidate,
    salas_hypercyclic,
    salas_supercyclic,
    theorem_a_series,
    theorem_b_check,
)
from orbitforge.gamma import GammaSet
from orbitforge.group import DiscreteVec, RealPoint, RealUnion, translate
from orbitforge.plan import GreedyInconclusive, SynthesisPlan
from orbitforge.repro import (
    claim2_closed_form,
    ex52_induction_check,
    ex52_plan,
    ex52_v1,
    final_z,
    r_peaks,
    twosided_exp,
)
from orbitforge.shifts import ShiftSet
from orbitforge.synthesis import TargetStream, synthesize
from orbitforge.weights import local_norm_p, m_bound, weighted_norm


def record(n, ok, detail, elapsed, limit):
    within = elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    line = f"[{status}] criterion {n}: {detail} ({elapsed:.2f}s, limit {limit:g}s)"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok and within


# ---------------------------------------------------------------------------


def criterion_1():
    t = time.perf_counter()
    w = r_peaks(12)
    ok, worst = True, []
    for n in range(2, 11):
        s = 2.0 ** -n
        mb = m_bound(w, RealPoint(0, s), 12)
        exact = 1 + (Fraction(2) ** (2 * n) - Fraction(2) ** n) * Fraction(1, 2 ** n)
        ratio = w(RealPoint(n, s)) / w(RealPoint(n, 0.0))
        ok &= ratio == float(exact) and 1 / (8 * s) <= ratio <= mb.value <= 2 / s
        worst.append(mb.value * s)
    return ok, f"1/(8s) <= M(s) <= 2/s for s = 2^-n, n=2..10; s*M(s) in [{min(worst):.3f}, {max(worst):.3f}]", \
        time.perf_counter() - t, 5


def criterion_2():
    t = time.perf_counter()
    w = r_peaks(12)
    ok, worst = True, 0.0
    for p in (1.0, 2.0):
        for n in range(2, 13):
            val = local_norm_p(w, RealUnion(((n, 0.0, 2.0 ** -n),), w.anchors), p)
            exact = Fraction(2 ** (n * int(p + 1)) - 1, int(p + 1) * (2 ** (2 * n) - 2 ** n))
            lower = 2.0 ** (n * (p - 1)) / ((p + 1) * 2 ** p)
            rel = abs(val - float(exact)) / float(exact)
            worst = max(worst, rel)
            ok &= rel <= 1e-12 and val >= lower
    spot = local_norm_p(w, RealUnion(((3, 0.0, 0.125),), w.anchors), 1.0)
    ok &= abs(spot - 0.5625) <= 1e-12 and spot >= 0.25 and claim2_closed_form(3, 1) == 0.5625
    return ok, f"integral matches closed form (max rel err {worst:.1e}), above the lower bound; n=3,p=1: {spot:.4f}", \
        time.perf_counter() - t, 1


def criterion_3():
    t = time.perf_counter()
    w = ex52_v1()
    hc = salas_hypercyclic(w)
    pw = pointwise_gamma_criterion(w, ShiftSet.half_line_pos(), GammaSet.all())
    ok = hc.verdict.type == FAILS_CERTIFIED and hc.verdict.bound == 1.0 and pw.verdict.type == HOLDS_CERTIFIED
    return ok, f"salas_hypercyclic {hc.verdict.type} (bound {hc.verdict.bound}), pointwise {pw.verdict.type}", \
        time.perf_counter() - t, 1


def criterion_4():
    t = time.perf_counter()
    w = ex52_v1()
    plan = ex52_plan()
    ok = isinstance(plan, SynthesisPlan) and len(plan) == 10
    detail = "greedy plan not found"
    if ok:
        check = ex52_induction_check(w, plan.p)
        for i, st in enumerate(plan.steps):
            ok &= check(st.n, st.s, st.lam, plan.steps[:i], st.F)
            ok &= math.log2(st.lam).is_integer() and 0 <= math.log2(st.lam) <= 40
        sr = theorem_a_series(plan, w)
        ok &= sr.partial_sum < 4 and sr.disjoint_ok
        detail = f"10 steps meet the three induction conditions, partial sum {sr.partial_sum:.4f} < 4"
    return ok, detail, time.perf_counter() - t, 10


def criterion_5():
    t = time.perf_counter()
    w = final_z()
    pw = pointwise_gamma_criterion(w, ShiftSet.half_line_neg(), GammaSet.all())
    sc = salas_supercyclic(w)
    flagged = pw.extra.get("group_admissible") == "not_admissible" and any("admissible" in n for n in pw.notes)
    ok = pw.verdict.type == HOLDS_CERTIFIED and sc.verdict.type == FAILS_CERTIFIED and sc.verdict.window["q"] == 1
    ok &= flagged and pw.extra["cross_check"]["salas_supercyclic"] == FAILS_CERTIFIED
    return ok, f"pointwise {pw.verdict.type}, salas_supercyclic {sc.verdict.type} at q=1 " \
               f"(log2 bound {sc.verdict.log2_bound:g}), admissibility flagged: {flagged}", time.perf_counter() - t, 1


def criterion_6():
    t = time.perf_counter()
    w = twosided_exp()
    cand = synthesize(w, ShiftSet.all(), GammaSet.singleton(1), 2, 20, 20, TargetStream())
    ok = not isinstance(cand, GreedyInconclusive) and len(cand.certificates) == 20
    worst = 0.0
    if ok:
        for n, b in cand.certificates:
            st = cand.plan.steps[n - 1]
            meas = orbit_error(cand.components[0], cand.targets.target(n - 1)[0], st.s, st.lam, w, 2)
            ok &= b ** 2 < 2.0 ** (1 - n) and meas <= b * (1 + 1e-9)
            worst = max(worst, meas / b if b else 0.0)
    return ok, f"20 certificates with B_n^2 < 2^(1-n); max measured/B_n = {worst:.3f}", time.perf_counter() - t, 30


def criterion_7():
    t = time.perf_counter()
    rng = np.random.default_rng(2024)
    gammas = [GammaSet.all(), GammaSet.zero_to_one(), GammaSet.one_to_inf(), GammaSet.annulus(0.5, 2.0)]
    worst = 0.0
    for i in range(100):
        w = random_weight(rng, spread=1.0, slope=0.5)
        pts = np.arange(-6, 7)
        f = DiscreteVec("Z", tuple((int(q), complex(*rng.normal(size=2))) for q in rng.choice(pts, 5, replace=False)))
        g = DiscreteVec("Z", tuple((int(q), complex(*rng.normal(size=2))) for q in rng.choice(pts, 5, replace=False)))
        s, gamma = int(rng.integers(-3, 4)), gammas[i % 4]
        err = best_lambda(f, g, s, gamma, 2, w)[1]
        ref = brute_oracle(f, g, s, gamma, 2, w)
        worst = max(worst, abs(err - ref) / ref)
    return worst <= 1e-6, f"p=2 closed form vs brute oracle, 100 instances, max rel gap {worst:.1e}", \
        time.perf_counter() - t, 10


def criterion_8():
    t = time.perf_counter()
    rng = np.random.default_rng(88)
    gammas = [GammaSet.all(), GammaSet.zero_to_one(), GammaSet.one_to_inf(), GammaSet.annulus(0.5, 2.0),
              GammaSet.singleton(1.5)]
    shifts = [ShiftSet.all(), ShiftSet.half_line_pos(), ShiftSet.half_line_neg()]
    sched = default_schedule(m_max=6)
    mismatches, count = 0, 0
    for i in range(50):
        w = random_weight(rng)
        gamma, S = gammas[i % 5], shifts[i % 3]
        theta = float(rng.uniform(0, 2 * math.pi))
        variants = (gamma, gamma.rotate(theta), gamma.magnitudes())
        for fn in (lambda g: pointwise_gamma_criterion(w, S, g, horizon=1024),
                   lambda g: theorem_b_check(w, S, g, 2, sched, horizon=1024)):
            reps = [fn(g).as_dict() for g in variants]
            mismatches += reps[1] != reps[0] or reps[2] != reps[0]
            count += 1
    return mismatches == 0, f"{count} report triples (G, e^(i theta)G, |G|) over 50 weights, {mismatches} differ", \
        time.perf_counter() - t, 10


def criterion_9():
    t = time.perf_counter()
    rng = np.random.default_rng(9)
    failures = []
    # norm axioms, translation composition, submultiplicativity, operator-norm bound
    for _ in range(200):
        w = random_weight(rng)
        f = DiscreteVec("Z", tuple((int(q), complex(*rng.normal(size=2))) for q in rng.integers(-8, 9, 4)))
        g = DiscreteVec("Z", tuple((int(q), complex(*rng.normal(size=2))) for q in rng.integers(-8, 9, 4)))
        p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
        lam = complex(*rng.normal(size=2))
        s, u = (int(v) for v in rng.integers(-6, 7, 2))
        if weighted_norm(f + g, w, p) > (weighted_norm(f, w, p) + weighted_norm(g, w, p)) * (1 + 1e-12):
            failures.append("triangle")
        if not math.isclose(weighted_norm(f.scale(lam), w, p), abs(lam) * weighted_norm(f, w, p), rel_tol=1e-12):
            failures.append("homogeneity")
        if translate(translate(f, s), u) != translate(f, s + u):
            failures.append("composition")
        if m_bound(w, s + u).log2_value > m_bound(w, s).log2_value + m_bound(w, u).log2_value + 1e-9:
            failures.append("submultiplicativity")
        if weighted_norm(translate(f, s), w, p) > m_bound(w, s).value * weighted_norm(f, w, p) * (1 + 1e-9):
            failures.append("operator norm")
    # exact integration against quadrature
    rp = r_peaks(8)
    for n in range(2, 9):
        for p in (1.0, 1.5, 2.0, 3.0):
            for pc, u0, u1 in rp.overlaps(n, -n - 0.5, 1.5):
                ref = quad(lambda x: pc.kind.value(x) ** p, u0, u1, epsrel=1e-13, epsabs=0)[0]
                if abs(pc.kind.integral_p(u0, u1, p) - ref) > 1e-9 * ref:
                    failures.append("quadrature")
    # witness re-validation and FailsCertified sampling
    gammas = [GammaSet.all(), GammaSet.zero_to_one(), GammaSet.one_to_inf(), GammaSet.annulus(0.5, 2.0)]
    fails_seen = 0
    for i in range(60):
        w = random_weight(rng)
        S = (ShiftSet.all(), ShiftSet.half_line_pos(), ShiftSet.half_line_neg())[i % 3]
        gamma = gammas[i % 4]
        r = pointwise_gamma_criterion(w, S, gamma, horizon=512)
        if not all(revalidate(r, w, gamma)):
            failures.append("witness")
        if r.verdict.type == FAILS_CERTIFIED:
            fails_seen += 1
            ss = np.array(list(S.enumerate("Z", 10_000)), dtype=np.int64)
            if log2_objective(w.log2_array(ss), w.log2_array(-ss), gamma).min() < r.verdict.log2_bound - 1e-9:
                failures.append("fails sampling")
        for q_max, fn in ((2, salas_hypercyclic), (2, salas_supercyclic)):
            sr = fn(w, q_max)
            if sr.verdict.type == FAILS_CERTIFIED:
                fails_seen += 1
                q, n0 = sr.verdict.window["q"], sr.verdict.window["n_from"]
                ns = np.arange(n0, n0 + 10_000)
                a, b = w.log2_array(ns + q), w.log2_array(q - ns)
                vals = a + b if fn is salas_supercyclic else np.logaddexp2(a, b)
                if vals.min() < sr.verdict.log2_bound - 1e-9:
                    failures.append("fails sampling")
    detail = (f"invariants green ({fails_seen} certified failures sampled at 10^4 points)" if not failures
              else f"violations: {sorted(set(failures))}")
    return not failures, detail, time.perf_counter() - t, 60


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9]


@pytest.mark.parametrize("n", range(1, 10))
def test_acceptance(n):
    ok, detail, elapsed, limit = CRITERIA[n - 1]()
    assert record(n, ok, detail, elapsed, limit), detail


if __name__ == "__main__":
    results = [record(i, *fn()) for i, fn in enumerate(CRITERIA, start=1)]
    sys.exit(0 if all(results) else 1)
