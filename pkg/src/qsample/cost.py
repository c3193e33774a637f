"""Query and ancilla accounting, the comparison cost model, and the benchmark sweep.

The prior QPE-based framework is represented only by its asymptotic formulas
with explicit constants; it is never simulated.
"""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, NamedTuple, Sequence

from .anneal import AnnealConfig, AnnealReport, budget_errors, run_anneal
from .errors import InvalidParameterError
from .filters import synthesize_filter
from .gadget import CONJUGATION_OVERHEAD, conjugated_gadget_queries
from .markov import MarkovChain
from .walk import walk_spectrum

CSV_FIELDS = ("log10_inv_eps", "our_queries", "wocjan_queries", "our_ancillas", "wocjan_ancillas")
WORKERS_ENV = "QSAMPLE_WORKERS"


@dataclass(frozen=True)
class CostModel:
    c_query: float = 1.0
    c_ancilla: float = 1.0
    conjugation_overhead: int = CONJUGATION_OVERHEAD

    def __post_init__(self):
        if self.c_query <= 0 or self.c_ancilla <= 0 or self.conjugation_overhead <= 0:
            raise InvalidParameterError("cost-model constants must be positive")


class Cost(NamedTuple):
    queries: float
    ancillas: int


def our_cost(report: AnnealReport) -> Cost:
    return Cost(report.total_queries, report.ancilla_count)


def wocjan_cost(ell: int, p_min: float, delta_min_phase: float, eps: float,
                model: CostModel = CostModel()) -> Cost:
    """Table-style cost of the QPE + pi/3 fixed-point framework.

    queries  = c_query * ell / (p_min * Delta_min) * ln(ell / eps)
    ancillas = c_ancilla * ceil(log2(1/Delta_min)) * ceil(log2(ell / (eps p_min)))

    Each ceil factor is floored at 1 since phase estimation needs at least one
    qubit of precision.
    """
    if ell < 1 or not (0 < p_min <= 1) or delta_min_phase <= 0 or not (0 < eps < 1):
        raise InvalidParameterError("wocjan_cost needs ell >= 1, p_min in (0,1], Delta > 0, eps in (0,1)")
    queries = model.c_query * ell / (p_min * delta_min_phase) * math.log(ell / eps)
    bits_phase = max(1, math.ceil(math.log2(1.0 / delta_min_phase)))
    bits_reps = max(1, math.ceil(math.log2(ell / (eps * p_min))))
    return Cost(queries, math.ceil(model.c_ancilla * bits_phase * bits_reps))


def estimate_queries(phase_gaps: Sequence[float], p_bounds: Sequence[float], eps: float,
                     conjugation_overhead: int = CONJUGATION_OVERHEAD) -> int:
    """Query count of a compiled anneal from its schedule lengths and filter degrees alone.

    Uses the same budget split and accounting as :func:`run_anneal`, so it
    reproduces the simulated count exactly without evolving any state.
    """
    ell = len(p_bounds)
    if len(phase_gaps) != ell + 1:
        raise InvalidParameterError("need one phase gap per chain (ell + 1)")
    total = 0
    for i, b in enumerate(budget_errors(eps, ell, p_bounds)):
        if b.L == 1:
            continue
        ds = synthesize_filter(phase_gaps[i], b.eps_w).d
        dt = synthesize_filter(phase_gaps[i + 1], b.eps_w).d
        pairs = (b.L - 1) // 2
        total += pairs * (conjugated_gadget_queries(ds, conjugation_overhead)
                          + conjugated_gadget_queries(dt, conjugation_overhead))
    return total


def _workers(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def benchmark_sweep(chains: Sequence[MarkovChain], eps_grid: Sequence[float], fast: bool = True,
                    model: CostModel = CostModel(), workers: int | None = None) -> list[dict]:
    """One row per eps: our measured/estimated cost next to the comparison model.

    Rows come back in ``eps_grid`` order regardless of parallelism.
    """
    template = AnnealConfig(list(chains), 0.5, conjugation_overhead=model.conjugation_overhead)
    p_bounds = template.p_bounds()
    gaps = [walk_spectrum(c).phase_gap for c in chains]
    p_min, delta_min, ell = min(p_bounds), min(gaps), template.ell

    def row(eps: float) -> dict:
        if fast:
            ours = Cost(estimate_queries(gaps, p_bounds, eps, model.conjugation_overhead), 1)
        else:
            cfg = AnnealConfig(list(chains), eps, conjugation_overhead=model.conjugation_overhead)
            ours = our_cost(run_anneal(cfg))
        theirs = wocjan_cost(ell, p_min, delta_min, eps, model)
        return {
            "log10_inv_eps": math.log10(1.0 / eps),
            "our_queries": ours.queries,
            "wocjan_queries": theirs.queries,
            "our_ancillas": ours.ancillas,
            "wocjan_ancillas": theirs.ancillas,
        }

    n_workers = _workers(workers)
    if n_workers == 1:
        return [row(e) for e in eps_grid]
    with ThreadPoolExecutor(n_workers) as pool:
        return list(pool.map(row, eps_grid))


def write_csv(rows: Sequence[dict], fh: IO[str]) -> None:
    writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: repr(float(r[k])) if isinstance(r[k], float) else r[k] for k in CSV_FIELDS})
