"""Invariant suites behind the ``verify`` command.

Each suite returns a list of :class:`Check` records with the measured value,
its bound, and ``ratio = value / bound`` (a check passes when the value is
within the bound plus its absolute slack).
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .anneal import overlap, round_down_sig
from .filters import synthesize_filter
from .fpaa import compiled_stage, ideal_fpaa_2d, make_bundle, make_schedule
from .gadget import JointState, build_gadget, gadget_error_norm
from .gibbs import DEFAULT_BETAS, GibbsModel, gibbs_overlap, verify_schedule
from .markov import IsingLadder, build_glauber_chain, random_reversible_chain, resampling_chain
from .walk import apply_walk, dense_walk_matrix, walk_spectrum

PHIS = (math.pi / 7, math.pi / 3, math.pi, 5 * math.pi / 3)
EPS_GRID = (1e-1, 1e-2, 1e-3)
P_LOWERS = (1 / 15, 0.1, 0.25, 0.5)


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    value: float
    bound: float
    slack: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.bound + self.slack)

    @property
    def ratio(self) -> float:
        return self.value / self.bound if self.bound > 0 else (0.0 if self.value <= self.slack else math.inf)

    def to_dict(self) -> dict:
        out = asdict(self)
        out.update(ratio=self.ratio, passed=self.passed)
        return out


def random_chains(rng: np.random.Generator, count: int, n_range=(2, 16)) -> list:
    return [random_reversible_chain(int(rng.integers(n_range[0], n_range[1] + 1)), rng) for _ in range(count)]


def suite_gadget_bound(rng: np.random.Generator, trials: int = 20) -> list[Check]:
    """Gadget error against 2 eps_w and the tighter |e^{i phi} - 1| eps_w, worst case per chain."""
    out = []
    for t, chain in enumerate(random_chains(rng, trials)):
        spec = walk_spectrum(chain)
        worst = 0.0
        for eps_w in EPS_GRID:
            filt = synthesize_filter(spec.phase_gap, eps_w)
            for phi in PHIS:
                err = gadget_error_norm(build_gadget(spec, filt, phi))
                tight = abs(np.exp(1j * phi) - 1) * eps_w
                worst = max(worst, (err - 1e-9) / min(2 * eps_w, tight))
        out.append(Check("prop1", f"chain{t}_n{chain.n}", worst, 1.0))
    return out


def filter_projector_error(spec, filt) -> float:
    """||Upsilon(W) - Pi_0|| as the largest |Upsilon| over nonzero eigenphases."""
    phases = spec.all_phases()
    nonzero = phases[np.abs(phases) > 0]
    return float(np.max(np.abs(filt(nonzero)))) if nonzero.size else 0.0


def suite_filter_projector(rng: np.random.Generator, trials: int = 10) -> list[Check]:
    out = []
    grid = np.linspace(-math.pi, math.pi, 4001)
    for t, chain in enumerate(random_chains(rng, trials)):
        spec = walk_spectrum(chain)
        for eps_w in EPS_GRID:
            filt = synthesize_filter(spec.phase_gap, eps_w)
            out.append(Check("cor1", f"chain{t}_eps{eps_w:g}", filter_projector_error(spec, filt), eps_w))
            vals = np.abs(filt(grid))
            # |Upsilon| <= 1 everywhere, touching 1 only at theta = 0.
            off = vals[np.abs(grid) > 1e-9]
            out.append(Check("cor1", f"chain{t}_eps{eps_w:g}_bounded", float(np.max(off)), 1.0 - 1e-12))
    return out


def suite_fpaa(rng: np.random.Generator, p_grid: int = 50) -> list[Check]:
    out = []
    for p_lower in P_LOWERS:
        for eps_fp in EPS_GRID:
            sched = make_schedule(p_lower, eps_fp)
            worst = max(ideal_fpaa_2d(p, sched).trace_distance for p in np.linspace(p_lower, 1.0, p_grid))
            out.append(Check("fpaa", f"p{p_lower:.4g}_eps{eps_fp:g}_L{sched.L}", worst, eps_fp, 1e-12))
    return out


def _stage_pairs():
    two_a = resampling_chain(np.array([0.5, 0.5]), 0.6)
    two_b = resampling_chain(np.array([0.85, 0.15]), 0.6)
    lad = IsingLadder(2)
    return [
        ("two_state", two_a, two_b),
        ("ladder2x2", build_glauber_chain(lad, 0.0), build_glauber_chain(lad, 0.6)),
    ]


def suite_stage_bound(rng: np.random.Generator) -> list[Check]:
    out = []
    for name, ca, cb in _stage_pairs():
        src, tgt = make_bundle(ca), make_bundle(cb)
        p = overlap(ca.pi, cb.pi)
        start = JointState.embed(ca.qsample)
        for eps_fp in EPS_GRID:
            sched = make_schedule(round_down_sig(p), eps_fp)
            exact = compiled_stage(start, src, tgt, sched).trace_distance
            ideal = ideal_fpaa_2d(p, sched).trace_distance
            out.append(Check("cor2", f"{name}_exact_vs_ideal_eps{eps_fp:g}", abs(exact - ideal), 1e-9))
            for eps_w in EPS_GRID:
                fs = synthesize_filter(src.spec.phase_gap, eps_w)
                ft = synthesize_filter(tgt.spec.phase_gap, eps_w)
                res = compiled_stage(start, src.with_filter(fs), tgt.with_filter(ft), sched)
                bound = 2 * (sched.L - 1) * eps_w + eps_fp
                out.append(Check("cor2", f"{name}_fp{eps_fp:g}_w{eps_w:g}_L{sched.L}", res.trace_distance, bound, 1e-8))
    return out


def suite_oracle(rng: np.random.Generator, trials: int = 6, vectors: int = 50) -> list[Check]:
    """Matrix-free and spectral application of W against the dense matrix."""
    out = []
    for t, chain in enumerate(random_chains(rng, trials, (2, 8))):
        n = chain.n
        spec = walk_spectrum(chain)
        Wd = dense_walk_matrix(chain)
        u = rng.normal(size=(vectors, n, n)) + 1j * rng.normal(size=(vectors, n, n))
        ref = (u.reshape(vectors, -1) @ Wd.T).reshape(u.shape)
        free = apply_walk(chain, u)
        gp, gm, sym, anti = spec.decompose(u)
        spectral = spec.reconstruct(
            np.exp(1j * spec.theta_plus) * gp, np.exp(1j * spec.theta_minus) * gm, -sym, anti
        )
        scale = np.max(np.abs(ref))
        out.append(Check("oracle", f"chain{t}_n{n}_matrix_free", float(np.max(np.abs(free - ref)) / scale), 1e-10))
        out.append(Check("oracle", f"chain{t}_n{n}_spectral", float(np.max(np.abs(spectral - ref)) / scale), 1e-10))
    return out


def suite_gibbs(rng: np.random.Generator) -> list[Check]:
    out = []
    for cols in (2, 3, 4):
        model = GibbsModel(IsingLadder(cols), DEFAULT_BETAS)
        worst = 0.0
        b = model.betas
        for x, y in zip(b, b[1:]):
            direct = float(model.qsample(x) @ model.qsample(y)) ** 2
            worst = max(worst, abs(gibbs_overlap(model, x, y) - direct))
        out.append(Check("gibbs", f"2x{cols}_identity", worst, 1e-12))
        res = verify_schedule(model)
        # Expressed as value <= bound: 1/15 against the minimum overlap.
        out.append(Check("gibbs", f"2x{cols}_min_overlap", 1 / 15, res["min_overlap"]))
    return out


SUITES: dict[str, Callable[..., list[Check]]] = {
    "prop1": suite_gadget_bound,
    "cor1": suite_filter_projector,
    "fpaa": suite_fpaa,
    "cor2": suite_stage_bound,
    "oracle": suite_oracle,
    "gibbs": suite_gibbs,
}
