"""Acceptance criteria 1-9, each at its stated tolerance.

Every test records a one-line verdict; the lines are printed in the pytest
terminal summary, or directly when this file is run as a script.
"""
import math
import sys
import time

import numpy as np
import pytest
from scipy.optimize import brentq

from qsample.anneal import AnnealConfig, overlap, round_down_sig, run_anneal
from qsample.cost import benchmark_sweep, estimate_queries, wocjan_cost
from qsample.filters import synthesize_filter
from qsample.fpaa import compiled_stage, ideal_fpaa_2d, make_bundle, make_schedule, schedule_length
from qsample.gadget import JointState, build_gadget, gadget_error_norm
from qsample.gibbs import DEFAULT_BETAS, GibbsModel, gibbs_overlap, gibbs_qsample_run, verify_schedule
from qsample.markov import IsingLadder, build_glauber_chain, random_reversible_chain, resampling_chain
from qsample.walk import apply_spectral_function, apply_walk, dense_walk_matrix, walk_spectrum

SEED = 20240617
PHIS = (math.pi / 7, math.pi / 3, math.pi, 5 * math.pi / 3)
EPS3 = (1e-1, 1e-2, 1e-3)
SWEEP = [10.0**-k for k in range(1, 7)]

RESULTS: dict[int, tuple[bool, str]] = {}


def record(k: int, ok: bool, detail: str):
    RESULTS[k] = (ok, detail)
    print(verdict_line(k))


def verdict_line(k: int) -> str:
    ok, detail = RESULTS[k]
    return f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"


def _chains20():
    rng = np.random.default_rng(SEED)
    sizes = list(range(2, 17)) + [4, 7, 9, 12, 16]
    return [random_reversible_chain(n, rng, density=1.0 if i % 3 else 0.5) for i, n in enumerate(sizes)]


def test_criterion_1_gadget_bound():
    t0 = time.perf_counter()
    worst_2, worst_tight, cases = 0.0, 0.0, 0
    ok = True
    for chain in _chains20():
        spec = walk_spectrum(chain)
        for eps_w in EPS3:
            filt = synthesize_filter(spec.phase_gap, eps_w)
            for phi in PHIS:
                err = gadget_error_norm(build_gadget(spec, filt, phi))
                tight = abs(np.exp(1j * phi) - 1) * eps_w
                ok &= err <= 2 * eps_w + 1e-9 and err <= tight + 1e-9
                worst_2 = max(worst_2, err / (2 * eps_w))
                worst_tight = max(worst_tight, err / tight)
                cases += 1
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    record(1, ok, f"{cases} cases, max err/(2eps_w)={worst_2:.4f}, max err/(|e^(i phi)-1| eps_w)={worst_tight:.4f}, {elapsed:.1f}s")
    assert ok


def _dense_filter_error(chain, filt):
    """||Upsilon(W) - Pi_0|| from dense eigendecomposition of the unitary W."""
    W = dense_walk_matrix(chain)
    phases = np.angle(np.linalg.eigvals(W))
    nonzero = phases[np.abs(phases) > 1e-9]
    return float(np.max(np.abs(filt(nonzero))))


def test_criterion_2_filter_projector():
    worst, dense_gap, ok = 0.0, 0.0, True
    grid = np.linspace(-math.pi, math.pi, 20001)
    chains = _chains20() + [build_glauber_chain(IsingLadder(2), b) for b in DEFAULT_BETAS]
    for chain in chains:
        spec = walk_spectrum(chain)
        for eps_w in EPS3:
            filt = synthesize_filter(spec.phase_gap, eps_w)
            phases = spec.all_phases()
            err = float(np.max(np.abs(filt(phases[np.abs(phases) > 0]))))
            ok &= err <= eps_w
            worst = max(worst, err / eps_w)
            if chain.n <= 8:
                dense_gap = max(dense_gap, abs(err - _dense_filter_error(chain, filt)))
            vals = np.abs(filt(grid))
            ok &= vals.max() <= 1.0 + 1e-12
            ok &= bool(np.all(vals[np.abs(grid) > 1e-6] < 1.0))
            ok &= filt(0.0) == 1.0
    ok &= dense_gap < 1e-9
    record(2, ok, f"max ||U(W)-Pi0||/eps_w={worst:.4f} over {len(chains)} chains, dense cross-check diff={dense_gap:.1e}, |U|=1 only at 0")
    assert ok


def test_criterion_3_fixed_point():
    ok = schedule_length(0.25, 0.1) == 7
    worst = 0.0
    for p_lower in (1 / 15, 0.1, 0.25, 0.5):
        for eps in EPS3:
            sched = make_schedule(p_lower, eps)
            d = max(ideal_fpaa_2d(p, sched).trace_distance for p in np.linspace(p_lower, 1.0, 50))
            ok &= d <= eps
            worst = max(worst, d / eps)
    record(3, ok, f"L(0.25, 0.1)={schedule_length(0.25, 0.1)}, max d_tr/eps_fp={worst:.6f} over 12 schedules x 50 p")
    assert ok


def test_criterion_4_compiled_stage():
    t0 = time.perf_counter()
    pairs = [
        ("two-state", resampling_chain(np.array([0.5, 0.5]), 0.6), resampling_chain(np.array([0.85, 0.15]), 0.6)),
        ("2x2", build_glauber_chain(IsingLadder(2), 0.0), build_glauber_chain(IsingLadder(2), 0.6)),
    ]
    ok, worst, exact_gap = True, 0.0, 0.0
    for _, ca, cb in pairs:
        p = overlap(ca.pi, cb.pi)
        src, tgt = make_bundle(ca), make_bundle(cb)
        start = JointState.embed(ca.qsample)
        for eps_fp in EPS3:
            sched = make_schedule(round_down_sig(p), eps_fp)
            ex = compiled_stage(start, src, tgt, sched).trace_distance
            exact_gap = max(exact_gap, abs(ex - ideal_fpaa_2d(p, sched).trace_distance))
            for eps_w in EPS3:
                fs = synthesize_filter(src.spec.phase_gap, eps_w)
                ft = synthesize_filter(tgt.spec.phase_gap, eps_w)
                d = compiled_stage(start, src.with_filter(fs), tgt.with_filter(ft), sched).trace_distance
                bound = 2 * (sched.L - 1) * eps_w + eps_fp
                ok &= d <= bound + 1e-8
                worst = max(worst, d / bound)
    ok &= exact_gap <= 1e-9
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 120
    record(4, ok, f"max d_tr/bound={worst:.4f}, exact-vs-ideal diff={exact_gap:.1e}, {elapsed:.1f}s")
    assert ok


def test_criterion_5_end_to_end():
    ok, parts = True, []
    chains = [build_glauber_chain(IsingLadder(2), b) for b in DEFAULT_BETAS]
    for eps in (0.1, 0.01):
        r = run_anneal(AnnealConfig(chains, eps))
        ok &= r.final_d_tr <= eps and r.ancilla_count == 1
        parts.append(f"2x2 eps={eps}: d_tr={r.final_d_tr:.3g} q={r.total_queries}")
    t0 = time.perf_counter()
    chains = [build_glauber_chain(IsingLadder(3), b) for b in DEFAULT_BETAS]
    r = run_anneal(AnnealConfig(chains, 0.1))
    elapsed = time.perf_counter() - t0
    ok &= r.final_d_tr <= 0.1 and r.ancilla_count == 1 and r.n == 64 and elapsed < 600
    parts.append(f"2x3 eps=0.1: d_tr={r.final_d_tr:.3g} q={r.total_queries} in {elapsed:.1f}s")
    record(5, ok, "; ".join(parts) + "; ancillas=1")
    assert ok


def test_criterion_6_dense_oracle():
    rng = np.random.default_rng(SEED + 6)
    chains = [random_reversible_chain(n, rng) for n in range(2, 9)]
    chains += [random_reversible_chain(n, rng, density=0.4) for n in (5, 8)]
    chains += [build_glauber_chain(IsingLadder(1), b, lazy=lz) for b in (0.0, 1.2) for lz in (True, False)]
    worst = 0.0
    for chain in chains:
        n = chain.n
        W = dense_walk_matrix(chain)
        spec = walk_spectrum(chain)
        u = rng.normal(size=(50, n, n)) + 1j * rng.normal(size=(50, n, n))
        ref = (u.reshape(50, -1) @ W.T).reshape(u.shape)
        via_spec = apply_spectral_function(spec, lambda t: np.exp(1j * t), u)
        worst = max(worst, np.max(np.abs(via_spec - ref)), np.max(np.abs(apply_walk(chain, u) - ref)))
    ok = worst <= 1e-10
    record(6, ok, f"{len(chains)} chains (n<=8), 50 vectors each, max |engine - dense|={worst:.1e}")
    assert ok


def _overlap_family(n, p, gap=0.5):
    """Uniform source and a one-spike target with squared overlap exactly p, both resampling chains."""
    u = np.full(n, 1.0 / n)
    f = lambda a: (math.sqrt(a / n) + (n - 1) * math.sqrt((1 - a) / ((n - 1) * n))) ** 2 - p
    a = brentq(f, 1.0 / n, 1.0 - 1e-15, xtol=1e-15)
    t = np.r_[a, np.full(n - 1, (1 - a) / (n - 1))]
    return [resampling_chain(u, gap), resampling_chain(t, gap)]


def test_criterion_7_scaling():
    ps = np.geomspace(0.2, 0.004, 8)
    inv_sqrt = np.log(1 / np.sqrt(ps))
    Ls = np.array([schedule_length(p, 1e-3) for p in ps])
    s_L = np.polyfit(inv_sqrt, np.log(Ls + 1), 1)[0]

    xs, ds = [], []
    for Delta in np.geomspace(0.02, 2.0, 12):
        for eps in SWEEP:
            xs.append(math.log(1 / eps) / Delta)
            ds.append(synthesize_filter(Delta, eps).d)
    xs, ds = np.array(xs), np.array(ds)
    k_d = float(xs @ ds / (xs @ xs))

    eps = 1e-3
    ours, theirs = [], []
    for p in ps:
        chains = _overlap_family(512, p)
        cfg = AnnealConfig(chains, eps)
        gaps = [walk_spectrum(c).phase_gap for c in chains]
        pb = cfg.p_bounds()
        ours.append(estimate_queries(gaps, pb, eps))
        theirs.append(wocjan_cost(1, min(pb), min(gaps), eps).queries)
    # Fast estimate is the same count the simulator reports; confirm at one point.
    chains = _overlap_family(512, ps[0])
    same = run_anneal(AnnealConfig(chains, eps)).total_queries == ours[0]
    s_q = np.polyfit(inv_sqrt, np.log(ours), 1)[0]
    s_w = np.polyfit(inv_sqrt, np.log(theirs), 1)[0]
    ok = 0.8 <= s_L <= 1.2 and 0.5 <= k_d <= 1.5 and 0.8 <= s_q <= 1.2 and same
    record(7, ok, f"slope(L+1 vs 1/sqrt p)={s_L:.3f}, d/((1/Delta)ln(1/eps))={k_d:.3f}, "
                  f"slope(queries vs 1/sqrt p_min)={s_q:.3f} (comparison model {s_w:.3f}), estimate==simulated: {same}")
    assert ok


def _sweep_checks(cols):
    chains = [build_glauber_chain(IsingLadder(cols), b) for b in DEFAULT_BETAS]
    rows = benchmark_sweep(chains, SWEEP)
    a = all(r["our_ancillas"] == 1 for r in rows)
    w = [r["wocjan_ancillas"] for r in rows]
    b = w == sorted(w) and w[-1] >= 4
    below = [r["our_queries"] < r["wocjan_queries"] for r in rows]
    # Crossover: some grid point from which every smaller eps favors us.
    c = any(all(below[i:]) for i in range(len(below)))
    ratio = [r["our_queries"] / r["wocjan_queries"] for r in rows]
    return a, b, c, ratio


def test_criterion_8_benchmark_shape():
    parts, ok = [], True
    for cols in (3, 4):
        a, b, c, ratio = _sweep_checks(cols)
        ok &= a and b and c
        parts.append(f"2x{cols}: (a) {'ok' if a else 'FAIL'} (b) {'ok' if b else 'FAIL'} "
                     f"(c) {'ok' if c else 'FAIL'} ours/theirs={min(ratio):.1f}..{max(ratio):.1f}")
    record(8, ok, "; ".join(parts))
    assert ok


def test_criterion_9_gibbs():
    ok, id_err, min_ov = True, 0.0, 1.0
    rng = np.random.default_rng(SEED + 9)
    for cols in (2, 3, 4):
        model = GibbsModel(IsingLadder(cols), DEFAULT_BETAS)
        pairs = list(zip(DEFAULT_BETAS, DEFAULT_BETAS[1:])) + [tuple(rng.uniform(0, 3, 2)) for _ in range(5)]
        for bi, bj in pairs:
            direct = float(model.qsample(bi) @ model.qsample(bj)) ** 2
            id_err = max(id_err, abs(gibbs_overlap(model, bi, bj) - direct))
        res = verify_schedule(model)
        ok &= res["pass"]
        min_ov = min(min_ov, res["min_overlap"])
    ok &= id_err <= 1e-12
    r = gibbs_qsample_run(GibbsModel(IsingLadder(2), DEFAULT_BETAS), 0.1)
    ok &= r.final_d_tr <= 0.1 and r.measured_tvd <= r.final_d_tr
    record(9, ok, f"identity err={id_err:.1e}, min adjacent overlap={min_ov:.4f} (>= 1/15), "
                  f"gibbs 2x2: d_tr={r.final_d_tr:.3g}, tvd={r.measured_tvd:.3g}")
    assert ok


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
