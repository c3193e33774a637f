"""
Fixed-point amplitude amplification
===================================

A schedule built for overlap at least p_lower lands within eps of the target
for every overlap in [p_lower, 1]; there is no overshoot to tune around.
"""

import numpy as np

from qsample.fpaa import ideal_fpaa_2d, make_schedule

sched = make_schedule(p_lower=0.25, eps_fp=0.1)
print(f"L = {sched.L}, gamma = {sched.gamma:.6f}")
print("alphas", np.round(sched.alphas, 6))
print("betas ", np.round(sched.betas, 6))

for p in np.linspace(0.25, 1.0, 7):
    print(f"p = {p:.3f}: trace distance {ideal_fpaa_2d(p, sched).trace_distance:.5f}")

###############################################################################
# Length scales like 1/sqrt(p).

for p in (0.5, 0.1, 0.02, 0.005):
    print(f"p_lower = {p}: L = {make_schedule(p, 1e-3).L}")
