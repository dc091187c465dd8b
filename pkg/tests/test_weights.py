import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from helpers import weight_from_seed
from orbitforge.group import DiscreteVec, IntInterval, PointSet, RealPoint, RealUnion, StepVec, translate
from orbitforge.repro import claim2_vector, ex52_v1, final_z, r_peaks, twosided_exp
from orbitforge.shifts import ShiftSet
from orbitforge.weights import (
    Affine,
    Const,
    DiscreteWeight,
    Exp2,
    Log2Affine,
    ProductWeight,
    Recip,
    admissible,
    group_admissible,
    local_norm,
    local_norm_p,
    m_bound,
    sublevel_set,
    sup_on,
    weighted_norm,
    weighted_norm_p,
)

seeds = st.integers(0, 2 ** 32 - 1)
ps = st.sampled_from([1.0, 1.5, 2.0, 3.0])
coeffs = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)
zvecs = st.lists(st.tuples(st.integers(-12, 12), coeffs), max_size=8).map(lambda e: DiscreteVec("Z", tuple(e)))
RP = r_peaks(8)


# --- norm axioms -----------------------------------------------------------


@given(seeds, zvecs, zvecs, ps, coeffs)
def test_norm_axioms_on_z(seed, f, g, p, lam):
    w = weight_from_seed(seed)
    nf, ng = weighted_norm(f, w, p), weighted_norm(g, w, p)
    assert weighted_norm(f + g, w, p) <= (nf + ng) * (1 + 1e-12) + 1e-300
    assert weighted_norm(f.scale(lam), w, p) == pytest.approx(abs(lam) * nf, rel=1e-12, abs=1e-300)
    assert (nf == 0) == f.is_zero()


@settings(max_examples=40)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.01, 1), st.floats(0.01, 1), ps)
def test_norm_axioms_on_r(a, b, la, lb, p):
    f = StepVec(((5, a, a + la, 1.5),), RP.anchors)
    g = StepVec(((5, b, b + lb, -0.5j),), RP.anchors)
    assert weighted_norm(f + g, RP, p) <= (weighted_norm(f, RP, p) + weighted_norm(g, RP, p)) * (1 + 1e-12)
    assert weighted_norm(f.scale(3), RP, p) == pytest.approx(3 * weighted_norm(f, RP, p), rel=1e-12)


# --- operator norms --------------------------------------------------------


@given(seeds, st.integers(-8, 8), st.integers(-8, 8))
def test_m_submultiplicative_on_z(seed, s, t):
    w = weight_from_seed(seed)
    assert m_bound(w, s + t).log2_value <= m_bound(w, s).log2_value + m_bound(w, t).log2_value + 1e-9


@given(seeds, zvecs, st.integers(-10, 10), ps)
def test_operator_norm_inequality_on_z(seed, f, s, p):
    w = weight_from_seed(seed)
    b = m_bound(w, s)
    assert b.certified
    assert weighted_norm(translate(f, s), w, p) <= b.value * weighted_norm(f, w, p) * (1 + 1e-9) + 1e-300


def test_m_bound_witness_attains_on_z():
    w = weight_from_seed(7)
    for s in (-3, 1, 4):
        b = m_bound(w, s)
        t = b.witness
        assert w(t + s) / w(t) == pytest.approx(b.value, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 7), st.sampled_from([1.0, 2.0]))
def test_operator_norm_inequality_on_r(n, p):
    s = RealPoint(0, 2.0 ** -n)
    b = m_bound(RP, s, 8)
    f = claim2_vector(8)
    assert weighted_norm(translate(f, s), RP, p) <= b.value * weighted_norm(f, RP, p) * (1 + 1e-9)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_m_submultiplicative_on_r(n):
    s = 2.0 ** -n
    m1 = m_bound(RP, RealPoint(0, s), 8).value
    m2 = m_bound(RP, RealPoint(0, 2 * s), 8).value
    assert m2 <= m1 * m1 * (1 + 1e-9)


@given(seeds, st.integers(-6, 6), st.integers(0, 6), st.integers(0, 4), ps)
def test_local_norm_monotone(seed, lo, ln, extra, p):
    w = weight_from_seed(seed)
    small, big = IntInterval(lo, lo + ln), IntInterval(lo - extra, lo + ln + extra)
    assert local_norm(w, small, p) <= local_norm(w, big, p)
    assert sup_on(w, small) <= sup_on(w, big)


def test_local_norm_monotone_on_r():
    inner = RealUnion(((4, -0.5, 0.02),), RP.anchors)
    outer = RealUnion(((4, -1.5, 0.9),), RP.anchors)
    assert local_norm_p(RP, inner, 2) <= local_norm_p(RP, outer, 2)


# --- exact integration vs quadrature ----------------------------------------


KIND_CASES = [
    (Const(2.5), -1.0, 3.0),
    (Affine(1.0, -14.0), -0.5, 0.0),
    (Affine(1.0, 240.0), 0.0, 1 / 16),
    (Exp2(16.0, 1.0), -4.0, -1.0),
    (Exp2(0.5, -2.0), 0.0, 3.0),
    (Recip(1.0), 1 / 16, 1.0),
    (Recip(3.0), 0.2, 7.0),
]


@pytest.mark.parametrize("kind,u0,u1", KIND_CASES)
@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0])
def test_integral_matches_quadrature(kind, u0, u1, p):
    ref, _ = quad(lambda u: kind.value(u) ** p, u0, u1, epsabs=0, epsrel=1e-13, limit=200)
    assert kind.integral_p(u0, u1, p) == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("n", [2, 3, 5, 7])
@pytest.mark.parametrize("p", [1.0, 2.0])
def test_peak_window_integral_matches_quadrature(n, p):
    K = RealUnion(((n, -n - 0.5, 1.5),), RP.anchors)
    pieces = list(RP.overlaps(n, -n - 0.5, 1.5))
    ref = math.fsum(quad(lambda u, k=pc.kind: k.value(u) ** p, u0, u1, epsrel=1e-13, epsabs=0)[0]
                    for pc, u0, u1 in pieces)
    assert local_norm_p(RP, K, p) == pytest.approx(ref, rel=1e-9)


def test_r_peaks_is_continuous_at_breakpoints():
    for n in range(2, 9):
        pos = RP.anchors.position(n)
        for u in (-n, -1.0, -0.5, 0.0, 2.0 ** -n, 1.0):
            left = RP(RealPoint(0, pos + u - 1e-12))
            right = RP(RealPoint(0, pos + u + 1e-12))
            assert left == pytest.approx(right, rel=1e-6), (n, u)


def test_r_peaks_values():
    for n in range(2, 9):
        a = RP.anchors.position(n)
        assert RP(RealPoint(0, a)) == pytest.approx(1.0)
        assert RP(RealPoint(0, a + 2.0 ** -n)) == pytest.approx(2.0 ** n)
        assert RP(RealPoint(0, a - 0.75)) == pytest.approx(2.0 ** (n - 1))


def test_builders_are_stable():
    assert r_peaks(8) == r_peaks(8)
    assert r_peaks(8).anchors == r_peaks(12).anchors.__class__.factorial(8)
    with pytest.raises(ValueError):
        r_peaks(20)


# --- scaling ---------------------------------------------------------------


@given(seeds, st.integers(-6, 6), st.integers(-10, 10))
def test_scaling_by_power_of_two(seed, s, k):
    w = weight_from_seed(seed)
    v = w.scaled(2.0 ** k)
    # window values scale exactly; tails are shifted in log2 and may move by an ulp
    assert m_bound(v, s).value == pytest.approx(m_bound(w, s).value, rel=4e-15)
    f = DiscreteVec("Z", ((0, 1.0), (3, -2.0)))
    assert weighted_norm(f, v, 2) == pytest.approx(2.0 ** k * weighted_norm(f, w, 2), rel=1e-12)


@given(seeds, st.integers(-6, 6), st.floats(0.01, 100))
def test_scaling_general_kappa(seed, s, kappa):
    w = weight_from_seed(seed)
    assert m_bound(w.scaled(kappa), s).value == pytest.approx(m_bound(w, s).value, rel=1e-12)


def test_real_scaling():
    v = RP.scaled(3.0)
    s = RealPoint(0, 0.125)
    assert m_bound(v, s, 8).value == pytest.approx(m_bound(RP, s, 8).value, rel=1e-12)
    f = claim2_vector(8)
    assert weighted_norm(f, v, 2) == pytest.approx(3 * weighted_norm(f, RP, 2), rel=1e-12)


# --- admissibility ---------------------------------------------------------


def test_admissibility_of_examples():
    assert group_admissible(twosided_exp()).verdict == "admissible"
    assert group_admissible(ex52_v1()).verdict == "admissible"
    rep = group_admissible(final_z())
    assert rep.verdict == "not_admissible" and rep.certified
    neg = admissible(final_z(), ShiftSet.half_line_neg(), 16)
    assert neg.verdict == "admissible" and neg.certified
    assert m_bound(final_z(), -1).value == 0.5


def test_real_divergence_is_numeric_only():
    w = r_peaks(12)
    rep = admissible(w, ShiftSet.of([RealPoint(0, -1.0)]), 12)
    assert rep.verdict == "not_admissible" and not rep.certified


def test_product_weight():
    a, b = twosided_exp(), ex52_v1()
    w = ProductWeight((a, b))
    assert w((2, -3)) == a(2) * b(-3)
    assert m_bound(w, (1, -1)).value == pytest.approx(m_bound(a, 1).value * m_bound(b, -1).value)
    f = DiscreteVec("Zd", (((0, 0), 1.0), ((1, 2), 2.0)), 2)
    assert weighted_norm_p(f, w, 2) == pytest.approx(1 + 4 * (a(1) * b(2)) ** 2)


def test_point_set_windows():
    w = twosided_exp()
    assert local_norm_p(w, PointSet((0, 3)), 1) == pytest.approx(1 + 1 / 8)


def test_sublevel_set():
    K = RealUnion(((3, -3.0, 1.0),), RP.anchors)
    sub = sublevel_set(RP, K, 2.0)
    for a, lo, hi in sub.intervals:
        for u in np.linspace(lo, hi, 7)[1:-1]:
            assert RP(RealPoint(a, float(u))) <= 2.0 * (1 + 1e-12)


def test_tail_agreement_enforced():
    with pytest.raises(ValueError):
        DiscreteWeight(0, 1, (1.0, 2.0), Log2Affine(0.0, 0.0), Log2Affine(5.0, 1.0))
    with pytest.raises(ValueError):
        DiscreteWeight(0, 0, (0.0,))
