"""Best approximation of a target by orbit elements ``lam * translate(f, s)``.

The scalar set is read as a set of complex numbers: a singleton is the one
point ``lam0``; every other kind is the set of all ``lam`` whose magnitude
lies in the descriptor's magnitude set.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._parallel import pmap
from .gamma import GammaSet
from .group import DiscreteVec, StepVec, translate
from .shifts import ShiftSet
from .weights import ProductWeight, weighted_norm

INF = math.inf
GOLDEN = (math.sqrt(5.0) - 1) / 2


@dataclass(frozen=True)
class ApproxResult:
    s_star: object
    lambda_star: complex | None
    error: float
    attained: bool

    def as_dict(self) -> dict:
        from .serialize import point_to_json

        lam = None if self.lambda_star is None else {"re": self.lambda_star.real, "im": self.lambda_star.imag}
        return {"s": point_to_json(self.s_star), "lambda": lam, "error": self.error, "attained": self.attained}


def golden_section(fn, a: float, b: float, rel_tol: float = 1e-10, max_iter: int = 200) -> tuple[float, float]:
    """Minimise a unimodal ``fn`` on ``[a, b]``; returns ``(x, fn(x))``."""
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(max_iter):
        if abs(b - a) <= rel_tol * max(abs(a), abs(b), 1e-300):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = fn(d)
    best = min((fa, x) for x, fa in ((a, fn(a)), (c, fc), (d, fd), (b, fn(b))))
    return best[1], best[0]


# ---------------------------------------------------------------------------
# Alignment: norm**p = sum mass_i |lam h_i - g_i|**p
# ---------------------------------------------------------------------------


def _aligned(h, g, w, p):
    if isinstance(h, DiscreteVec):
        hd, gd = dict(h.entries), dict(g.entries)
        pts = sorted(set(hd) | set(gd))
        hv = np.array([hd.get(q, 0) for q in pts], dtype=complex)
        gv = np.array([gd.get(q, 0) for q in pts], dtype=complex)
        if isinstance(w, ProductWeight):
            ws = np.array([w(q) for q in pts])
        else:
            ws = w.value_array(np.asarray(pts, dtype=np.int64)) if pts else np.zeros(0)
        return hv, gv, ws ** p
    return _aligned_steps(h, g, w, p)


def _aligned_steps(h: StepVec, g: StepVec, w, p):
    tab = w.anchors
    tagged = [(a, lo, hi, c, 0) for a, lo, hi, c in h.pieces] + [(a, lo, hi, c, 1) for a, lo, hi, c in g.pieces]
    bps = sorted({(q.anchor, q.offset) for a, lo, hi, *_ in tagged for q in (tab.canonical(a, lo), tab.canonical(a, hi))},
                 key=lambda q: tab.absolute(*q))
    hv, gv, mass = [], [], []
    for (a0, o0), (a1, o1) in zip(bps, bps[1:]):
        hi = tab.rebase(a1, o1, a0)
        if not hi > o0:
            continue
        mid = 0.5 * (o0 + hi)
        c = [0j, 0j]
        for a, lo, phi, coeff, tag in tagged:
            m = tab.rebase(a0, mid, a)
            if lo < m < phi:
                c[tag] += coeff
        if c[0] == 0 and c[1] == 0:
            continue
        hv.append(c[0])
        gv.append(c[1])
        mass.append(math.fsum(pc.kind.integral_p(u0, u1, p) for pc, u0, u1 in w.overlaps(a0, o0, hi)))
    return np.array(hv, dtype=complex), np.array(gv, dtype=complex), np.array(mass)


def _err(lam: complex, hv, gv, mass, p) -> float:
    return float(np.sum(mass * np.abs(lam * hv - gv) ** p)) ** (1 / p)


# ---------------------------------------------------------------------------
# best_lambda
# ---------------------------------------------------------------------------


def best_lambda(f, g, s, gamma: GammaSet, p: float, w) -> tuple[complex | None, float, bool]:
    """Optimal ``lam`` in Gamma for ``||lam translate(f, s) - g||``; returns ``(lam, error, attained)``.

    ``lam`` is ``None`` when the translate vanishes (any scalar does equally
    well) and ``0`` when the infimum is only approached as ``lam -> 0``.
    """
    h = translate(f, s)
    hv, gv, mass = _aligned(h, g, w, p)
    g_norm = _err(0.0, hv, gv, mass, p)
    if not np.any(hv * (mass > 0)):
        return None, g_norm, False
    if gamma.kind == "singleton":
        return gamma.value, _err(gamma.value, hv, gv, mass, p), True
    lo, hi = gamma.bounds()
    if p == 2:
        return _best_l2(hv, gv, mass, gamma, lo, hi, g_norm)
    return _best_lp(hv, gv, mass, gamma, p, lo, hi, g_norm)


def _best_l2(hv, gv, mass, gamma, lo, hi, g_norm):
    hh = float(np.sum(mass * np.abs(hv) ** 2))
    gh = complex(np.sum(mass * np.conj(hv) * gv))
    phase = cmath.exp(1j * cmath.phase(gh)) if gh != 0 else 1.0
    r = abs(gh) / hh
    # the squared error is a quadratic in |lam| along the optimal phase
    if gamma.kind == "grid":
        m = min(gamma.grid, key=lambda x: (abs(x - r), x))
    else:
        m = min(max(r, lo), hi)
    if m == 0 or (m == lo and not gamma.contains(m)):
        if lo == 0:
            return 0j, g_norm, False
    lam = m * phase
    return lam, _err(lam, hv, gv, mass, 2), True


def _ray_min(hv, gv, mass, p, phase, gamma, lo, hi, r_max):
    """Minimise the (convex) error along ``r * phase`` over the magnitudes of Gamma."""
    fn = lambda r: _err(r * phase, hv, gv, mass, p)
    if gamma.kind == "grid":
        return min(((fn(m), m) for m in gamma.grid))[::-1]
    # the error exceeds ||g|| beyond r_max = 2 ||g|| / ||h||, so [lo, min(hi, r_max)] brackets the minimum
    a, b = lo, min(hi, max(r_max, lo))
    if a == b:
        return a, fn(a)
    return golden_section(fn, a, b, rel_tol=1e-12)


def _best_lp(hv, gv, mass, gamma, p, lo, hi, g_norm):
    h_norm = _err(1.0, hv, 0 * gv, mass, p)
    r_max = 2 * g_norm / h_norm
    # real data does not force a real phase: with |lam| bounded below and p > 2 a tilted phase can win
    ray = lambda ph: _ray_min(hv, gv, mass, p, ph, gamma, lo, hi, r_max)
    coarse = [cmath.exp(2j * math.pi * k / 64) for k in range(64)]
    scored = [(ray(ph), ph) for ph in coarse]
    (r, err), ph = min(scored, key=lambda c: c[0][1])
    th0 = cmath.phase(ph)
    theta, _ = golden_section(lambda t: ray(cmath.exp(1j * t))[1],
                              th0 - 2 * math.pi / 64, th0 + 2 * math.pi / 64, rel_tol=1e-10)
    cands = [((r, err), ph)]
    for q in (cmath.exp(1j * theta), 1.0, -1.0):
        cands.append((ray(q), q))
    (r, err), ph = min(cands, key=lambda c: c[0][1])
    if r == 0 or not gamma.contains(r):
        if lo == 0 and err >= g_norm * (1 - 1e-12):
            return 0j, g_norm, False
    return r * ph, err, True


# ---------------------------------------------------------------------------
# Oracle, best_approx, continuity
# ---------------------------------------------------------------------------


def brute_oracle(f, g, s, gamma: GammaSet, p: float, w, n_mag: int = 1000, n_phase: int = 64,
                 levels: int = 4, zoom: float = 8.0) -> float:
    """Grid search over log-magnitude x phase with ``levels`` zoomed refinements."""
    h = translate(f, s)
    hv, gv, mass = _aligned(h, g, w, p)
    g_norm = _err(0.0, hv, gv, mass, p)
    if not np.any(hv * (mass > 0)):
        return g_norm
    if gamma.kind == "singleton":
        return _err(gamma.value, hv, gv, mass, p)
    lo, hi = gamma.bounds()
    h_norm = _err(1.0, hv, 0 * gv, mass, p)
    scale = g_norm / h_norm if g_norm > 0 else 1.0
    if gamma.kind == "grid":
        mags = np.asarray(gamma.grid)
    else:
        a = max(lo, scale * 1e-6) if lo == 0 else lo
        b = min(hi, scale * 1e3) if hi == INF else hi
        mags = np.geomspace(a, b, n_mag) if b > a else np.array([a])
    phases = np.exp(2j * np.pi * np.arange(n_phase) / n_phase)

    def scan(ms, phs):
        lam = (ms[:, None] * phs[None, :]).ravel()
        errs = (np.abs(lam[:, None] * hv[None, :] - gv[None, :]) ** p) @ mass
        i = int(np.argmin(errs))
        return float(errs[i]) ** (1 / p), ms[i // len(phs)], phs[i % len(phs)]

    best, m, ph = scan(mags, phases)
    best = min(best, g_norm) if lo == 0 else best
    if gamma.kind == "grid":
        mag_step, ph_step = 0.0, 2 * math.pi / n_phase
    else:
        mag_step = math.log(mags[-1] / mags[0]) / max(len(mags) - 1, 1)
        ph_step = 2 * math.pi / n_phase
    th = cmath.phase(ph)
    for _ in range(levels):
        if mag_step > 0:
            ms = np.exp(np.linspace(math.log(m) - 2 * mag_step, math.log(m) + 2 * mag_step, 65))
            ms = np.clip(ms, lo if lo > 0 else ms.min(), hi)
        else:
            ms = np.array([m])
        phs = np.exp(1j * np.linspace(th - 2 * ph_step, th + 2 * ph_step, 65))
        e, m, ph = scan(ms, phs)
        best = min(best, e)
        th = cmath.phase(ph)
        mag_step /= zoom
        ph_step /= zoom
    return best


def best_approx(f, g, S: ShiftSet, gamma: GammaSet, p: float, w, horizon: int = 64) -> ApproxResult:
    """Minimal error over ``s`` in S (within horizon) and ``lam`` in Gamma."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    dim = getattr(w, "dim", 1)
    shifts = list(S.points) if S.kind == "list" else list(S.enumerate(w.space, horizon, dim))
    results = pmap(lambda s: best_lambda(f, g, s, gamma, p, w), shifts)
    best = None
    for s, (lam, err, att) in zip(shifts, results):
        key = (err, abs(lam) if lam is not None else INF)
        if best is None or key < best[0]:
            best = (key, ApproxResult(s, lam, err, att))
    if best is None:
        raise ValueError("shift set is empty within the horizon")
    return best[1]


def orbit_error(f, g, s, lam: complex, w, p: float) -> float:
    """``||lam translate(f, s) - g||``."""
    return weighted_norm(translate(f, s).scale(lam) - g, w, p)


def continuity_probe(f, s0, approach, w, p: float) -> list[float]:
    """``||T_s f - T_s0 f||`` for each ``s`` in ``approach``."""
    base = translate(f, s0)
    return [weighted_norm(translate(f, s) - base, w, p) for s in approach]
