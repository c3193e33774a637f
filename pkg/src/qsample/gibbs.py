"""Gibbs QSamples on Ising ladders: partition functions, schedule overlaps, and the anneal."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .anneal import AnnealConfig, AnnealReport, run_anneal
from .errors import InvalidParameterError, NumericFailureError, PreconditionError, SizeGuardError
from .gadget import JointState
from .markov import IsingLadder, build_glauber_chain

MAX_SPINS = 20
OVERLAP_THRESHOLD = 1.0 / 15.0
IDENTITY_TOL = 1e-12

DEFAULT_BETAS = (0.0, 0.3, 0.6, 0.9, 1.2)


@dataclass(frozen=True, eq=False)
class GibbsModel:
    ladder: IsingLadder
    betas: tuple[float, ...] = DEFAULT_BETAS
    eps: float | None = field(default=None)

    def __post_init__(self):
        if self.ladder.n_spins > MAX_SPINS:
            raise SizeGuardError(f"enumeration limited to {MAX_SPINS} spins")
        b = tuple(float(x) for x in self.betas)
        if not b or any(x < 0 or not math.isfinite(x) for x in b):
            raise InvalidParameterError("betas must be finite and nonnegative")
        if any(y < x for x, y in zip(b, b[1:])):
            raise InvalidParameterError("betas must be nondecreasing")
        object.__setattr__(self, "betas", b)

    @cached_property
    def energies(self) -> np.ndarray:
        return self.ladder.energies()

    @cached_property
    def histogram(self) -> np.ndarray:
        """N_k = number of configurations with exactly k unsatisfied bonds."""
        return np.bincount(self.energies, minlength=self.n_max + 1)

    @property
    def n_max(self) -> int:
        return self.ladder.n_bonds

    @property
    def n_states(self) -> int:
        return self.ladder.n_states

    def qsample(self, beta: float) -> np.ndarray:
        w = np.exp(-0.5 * beta * self.energies)
        return w / math.sqrt(partition_function(self, beta))

    @classmethod
    def from_json(cls, text: str) -> "GibbsModel":
        data = json.loads(text)
        ladder = IsingLadder(cols=int(data["cols"]), rows=int(data.get("rows", 2)))
        return cls(ladder, tuple(data.get("betas", DEFAULT_BETAS)), data.get("eps"))


def partition_function(model: GibbsModel, beta: float) -> float:
    """Z(beta) = sum_k N_k exp(-beta k) from the energy histogram."""
    k = np.arange(model.histogram.size)
    return float(np.sum(model.histogram * np.exp(-beta * k)))


def partition_function_enumerated(model: GibbsModel, beta: float) -> float:
    """Z(beta) by summing over every configuration, a second summation order."""
    return float(math.fsum(np.exp(-beta * model.energies)))


def gibbs_overlap(model: GibbsModel, beta_i: float, beta_j: float) -> float:
    """|<mu_i|mu_j>|^2 through Z((b_i + b_j)/2)^2 / (Z(b_i) Z(b_j)), cross-checked directly."""
    if beta_i < 0 or beta_j < 0:
        raise InvalidParameterError("inverse temperatures must be nonnegative")
    z_mid = partition_function(model, 0.5 * (beta_i + beta_j))
    value = z_mid * z_mid / (partition_function(model, beta_i) * partition_function(model, beta_j))
    direct = float(model.qsample(beta_i) @ model.qsample(beta_j)) ** 2
    if abs(value - direct) > IDENTITY_TOL:
        raise NumericFailureError(f"overlap identity off by {abs(value - direct):.3g}")
    return value


def verify_schedule(model: GibbsModel, threshold: float = OVERLAP_THRESHOLD) -> dict:
    b = model.betas
    overlaps = [gibbs_overlap(model, x, y) for x, y in zip(b, b[1:])]
    min_ov = min(overlaps, default=1.0)
    ell = len(b) - 1
    scale = math.sqrt(math.log(model.n_states) * math.log(model.n_max)) if model.n_max > 1 else float("nan")
    return {
        "overlaps": overlaps,
        "min_overlap": min_ov,
        "pass": bool(min_ov >= threshold),
        "ell": ell,
        "ell_over_sqrt_log_ratio": ell / scale if scale and not math.isnan(scale) else float("nan"),
    }


def gibbs_qsample_run(model: GibbsModel, eps: float, mode: str = "compiled", lazy: bool = True) -> AnnealReport:
    """Anneal through the model's schedule with Glauber chains, checking overlaps first."""
    check = verify_schedule(model)
    if not check["pass"]:
        raise PreconditionError(
            f"schedule fails the 1/15 overlap threshold (min overlap {check['min_overlap']:.4g})"
        )
    chains = [build_glauber_chain(model.ladder, b, lazy=lazy) for b in model.betas]
    if len(chains) == 1:
        # No transitions: the initial QSample is already the target.
        state = JointState.embed(chains[0].qsample)
        return AnnealReport(
            eps=eps, mode=mode, n=chains[0].n, stages=[], total_queries=0, final_d_tr=0.0,
            measured_tvd=0.0, phase_gaps=[], final_state=state,
        )
    return run_anneal(AnnealConfig(chains, eps, mode=mode))


def schedule_from_betas(betas: Sequence[float]) -> tuple[float, ...]:
    return tuple(float(b) for b in betas)
