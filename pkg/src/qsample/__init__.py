"""QSample preparation from reversible Markov chains with one ancilla qubit.

Selective phases about a chain's stationary QSample are compiled from a
Chebyshev gap filter on the qubitized walk and driven by a fixed-point
amplitude-amplification schedule; an annealer chains the stages together.
"""
__version__ = "0.1.0"

from .anneal import AnnealConfig, AnnealReport, run_anneal
from .cost import CostModel, benchmark_sweep, our_cost, wocjan_cost
from .errors import QSampleError
from .filters import ChebyshevFilter, synthesize_filter
from .fpaa import PhaseSchedule, ideal_fpaa_2d, make_schedule
from .gadget import build_gadget, gadget_error_norm
from .gibbs import GibbsModel, gibbs_overlap, gibbs_qsample_run, partition_function, verify_schedule
from .markov import IsingLadder, MarkovChain, build_glauber_chain, random_reversible_chain
from .walk import WalkSpectrum, walk_spectrum

__all__ = [
    "AnnealConfig", "AnnealReport", "ChebyshevFilter", "CostModel", "GibbsModel", "IsingLadder",
    "MarkovChain", "PhaseSchedule", "QSampleError", "WalkSpectrum", "benchmark_sweep", "build_gadget",
    "build_glauber_chain", "gadget_error_norm", "gibbs_overlap", "gibbs_qsample_run", "ideal_fpaa_2d",
    "make_schedule", "our_cost", "partition_function", "random_reversible_chain", "run_anneal",
    "synthesize_filter", "verify_schedule", "walk_spectrum", "wocjan_cost",
]
