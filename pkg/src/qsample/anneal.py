"""End-to-end QSample preparation across a sequence of chains."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .errors import CertificationError, InvalidParameterError, PreconditionError
from .filters import synthesize_filter
from .fpaa import PhaseSchedule, compiled_stage, make_bundle, make_schedule
from .gadget import CONJUGATION_OVERHEAD, JointState
from .markov import MarkovChain
from .metrics import trace_distance, tv_distance

MODES = ("compiled", "exact")
CERT_SLACK = 1e-9


@dataclass(frozen=True)
class StageBudget:
    eps_stage: float
    eps_fp: float
    eps_w: float
    schedule: PhaseSchedule

    @property
    def L(self) -> int:
        return self.schedule.L

    @property
    def bound(self) -> float:
        """eps_fp + 2 (L - 1) eps_w, the stage's certified trace-distance increment."""
        return self.eps_fp + 2 * (self.L - 1) * self.eps_w


def budget_errors(eps: float, ell: int, p_bounds: Sequence[float]) -> list[StageBudget]:
    """Uniform split eps_i = eps/ell, half to FPAA and half spread over the L-1 gadgets."""
    if not (0.0 < eps < 1.0):
        raise InvalidParameterError(f"eps must lie in (0, 1), got {eps!r}")
    if ell < 1 or len(p_bounds) != ell:
        raise InvalidParameterError(f"need ell >= 1 and one overlap bound per stage, got {ell}, {len(p_bounds)}")
    out = []
    eps_i = eps / ell
    for p in p_bounds:
        sched = make_schedule(p, eps_i / 2)
        eps_w = eps_i / (4 * (sched.L - 1)) if sched.L > 1 else 0.0
        out.append(StageBudget(eps_i, eps_i / 2, eps_w, sched))
    return out


def round_down_sig(p: float, digits: int = 3) -> float:
    """Round ``p`` in (0, 1] down to ``digits`` significant figures; near-1 values stay 1."""
    if p >= 1.0 - 1e-12:
        return 1.0
    exp = math.floor(math.log10(p))
    scale = 10.0 ** (digits - 1 - exp)
    out = math.floor(p * scale) / scale
    while out > p:
        out -= 1.0 / scale
    return out


def overlap(pi_a: np.ndarray, pi_b: np.ndarray) -> float:
    """|<pi_a|pi_b>|^2 for the QSamples of two distributions."""
    return float(np.sqrt(pi_a) @ np.sqrt(pi_b)) ** 2


@dataclass(frozen=True)
class AnnealConfig:
    chains: Sequence[MarkovChain]
    eps: float
    p_lower_overrides: Sequence[float | None] | None = None
    mode: str = "compiled"
    conjugation_overhead: int = CONJUGATION_OVERHEAD

    def __post_init__(self):
        if len(self.chains) < 2:
            raise InvalidParameterError("an anneal needs at least two chains (ell >= 1)")
        if not (0.0 < self.eps < 1.0):
            raise InvalidParameterError(f"eps must lie in (0, 1), got {self.eps!r}")
        if self.mode not in MODES:
            raise InvalidParameterError(f"mode must be one of {MODES}, got {self.mode!r}")
        if len({c.n for c in self.chains}) != 1:
            raise InvalidParameterError("all chains must share one state space")
        if self.p_lower_overrides is not None and len(self.p_lower_overrides) != self.ell:
            raise InvalidParameterError("p_lower_overrides needs one entry per stage")

    @property
    def ell(self) -> int:
        return len(self.chains) - 1

    def overlaps(self) -> list[float]:
        return [overlap(a.pi, b.pi) for a, b in zip(self.chains, self.chains[1:])]

    def p_bounds(self) -> list[float]:
        exact = self.overlaps()
        over = self.p_lower_overrides or [None] * self.ell
        return [round_down_sig(p) if o is None else float(o) for p, o in zip(exact, over)]


@dataclass(frozen=True)
class StageReport:
    i: int
    p_bound: float
    p_actual: float
    L: int
    eps_fp: float
    eps_w: float
    d_source: int
    d_target: int
    queries: int
    n_gadgets: int
    d_tr_measured: float
    bound: float


@dataclass
class AnnealReport:
    eps: float
    mode: str
    n: int
    stages: list[StageReport]
    total_queries: int
    final_d_tr: float
    measured_tvd: float
    phase_gaps: list[float]
    ancilla_count: int = 1
    final_state: JointState | None = field(default=None, repr=False)

    @property
    def ell(self) -> int:
        return len(self.stages)

    @property
    def register_qubits(self) -> int:
        return 2 * math.ceil(math.log2(self.n)) + 1

    @property
    def p_min(self) -> float:
        return min((s.p_bound for s in self.stages), default=1.0)

    @property
    def delta_min(self) -> float:
        return min(self.phase_gaps)

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "mode": self.mode,
            "n": self.n,
            "ell": self.ell,
            "total_queries": self.total_queries,
            "final_d_tr": self.final_d_tr,
            "measured_tvd": self.measured_tvd,
            "ancilla_count": self.ancilla_count,
            "register_qubits": self.register_qubits,
            "p_min": self.p_min,
            "delta_min": self.delta_min,
            "stages": [asdict(s) for s in self.stages],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def csv_row(self) -> dict:
        return {
            "eps": self.eps,
            "total_queries": self.total_queries,
            "final_d_tr": self.final_d_tr,
            "ancilla_count": self.ancilla_count,
        }


def born_marginal(state: JointState) -> np.ndarray:
    """Distribution of the first register when every qubit is measured."""
    return np.sum(np.abs(state.anc0) ** 2 + np.abs(state.anc1) ** 2, axis=-1)


def run_anneal(config: AnnealConfig) -> AnnealReport:
    chains = list(config.chains)
    exact_p = config.overlaps()
    p_bounds = config.p_bounds()
    for i, (pa, pb) in enumerate(zip(exact_p, p_bounds)):
        if not (0.0 < pb <= 1.0):
            raise PreconditionError(f"stage {i}: overlap bound {pb!r} outside (0, 1]")
        if pa < pb:
            raise PreconditionError(
                f"stage {i}: actual overlap {pa:.6g} is below the supplied bound {pb:.6g}"
            )
    budgets = budget_errors(config.eps, config.ell, p_bounds)
    bundles = [make_bundle(c) for c in chains]
    exact = config.mode == "exact"

    state = JointState.embed(chains[0].qsample)
    stages: list[StageReport] = []
    total = 0
    certified = 0.0
    for i, b in enumerate(budgets):
        src, tgt = bundles[i], bundles[i + 1]
        if exact or b.L == 1:
            fs = ft = None
        else:
            fs = synthesize_filter(src.spec.phase_gap, b.eps_w)
            ft = synthesize_filter(tgt.spec.phase_gap, b.eps_w)
        out = compiled_stage(
            state, src.with_filter(fs), tgt.with_filter(ft), b.schedule, config.conjugation_overhead
        )
        state = out.state
        total += out.queries
        certified += b.bound
        stages.append(
            StageReport(
                i=i,
                p_bound=p_bounds[i],
                p_actual=exact_p[i],
                L=b.L,
                eps_fp=b.eps_fp,
                eps_w=b.eps_w,
                d_source=fs.d if fs else 0,
                d_target=ft.d if ft else 0,
                queries=out.queries,
                n_gadgets=out.n_gadgets,
                d_tr_measured=out.trace_distance,
                bound=b.bound,
            )
        )
        if out.trace_distance > certified + CERT_SLACK:
            raise CertificationError(
                f"stage {i}: trace distance {out.trace_distance:.6g} exceeds cumulative budget {certified:.6g}"
            )

    target = chains[-1].pi
    marginal = born_marginal(state)
    final = stages[-1].d_tr_measured
    return AnnealReport(
        eps=config.eps,
        mode=config.mode,
        n=chains[0].n,
        stages=stages,
        total_queries=total,
        final_d_tr=final,
        measured_tvd=tv_distance(marginal / marginal.sum(), target),
        phase_gaps=[bd.spec.phase_gap for bd in bundles],
        final_state=state,
    )


__all__ = [
    "AnnealConfig",
    "AnnealReport",
    "StageBudget",
    "StageReport",
    "budget_errors",
    "born_marginal",
    "overlap",
    "round_down_sig",
    "run_anneal",
    "trace_distance",
    "tv_distance",
]
