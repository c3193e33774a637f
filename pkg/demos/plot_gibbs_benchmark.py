"""
Gibbs QSamples on Ising ladders
===============================

Anneal from the uniform QSample (beta = 0) to beta = 1.2 through
beta in {0, 0.3, 0.6, 0.9, 1.2}, then sweep eps to compare resource counts
with the phase-estimation cost model. Pass ``--plot`` to draw the two panels
with matplotlib.
"""

import sys

from qsample.cost import benchmark_sweep
from qsample.gibbs import DEFAULT_BETAS, GibbsModel, gibbs_qsample_run, verify_schedule
from qsample.markov import IsingLadder, build_glauber_chain

model = GibbsModel(IsingLadder(3), DEFAULT_BETAS)
check = verify_schedule(model)
print("adjacent overlaps", [round(x, 4) for x in check["overlaps"]])

report = gibbs_qsample_run(model, eps=0.01)
print(f"final trace distance {report.final_d_tr:.3e}, TVD {report.measured_tvd:.3e}, queries {report.total_queries}")
for s in report.stages:
    print(f"  stage {s.i}: p >= {s.p_bound}, L = {s.L}, d = ({s.d_source}, {s.d_target}), queries {s.queries}")

###############################################################################
# Resource sweep on the 2x4 ladder.

chains = [build_glauber_chain(IsingLadder(4), b) for b in DEFAULT_BETAS]
rows = benchmark_sweep(chains, [10.0**-k for k in range(1, 7)])
for r in rows:
    print(r)

if "--plot" in sys.argv:
    import matplotlib.pyplot as plt

    x = [r["log10_inv_eps"] for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    ax1.plot(x, [r["our_queries"] for r in rows], "o-", label="compiled gadgets")
    ax1.plot(x, [r["wocjan_queries"] for r in rows], "s-", label="QPE model")
    ax1.set_xlabel("log10(1/eps)")
    ax1.set_ylabel("queries")
    ax1.legend()
    ax2.plot(x, [r["our_ancillas"] for r in rows], "o-")
    ax2.plot(x, [r["wocjan_ancillas"] for r in rows], "s-")
    ax2.set_xlabel("log10(1/eps)")
    ax2.set_ylabel("ancilla qubits")
    fig.tight_layout()
    plt.show()
