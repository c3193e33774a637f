"""
Walk spectrum and the gap filter
================================

Build a lazy Glauber chain on a 2x2 Ising ladder, look at the eigenphases of
its qubitized walk, then synthesize a Chebyshev filter that keeps the
stationary direction and suppresses everything beyond the phase gap.
"""

import numpy as np

from qsample.filters import filter_degree_curve, synthesize_filter
from qsample.gadget import build_gadget, gadget_error_norm
from qsample.markov import IsingLadder, build_glauber_chain
from qsample.walk import walk_spectrum

chain = build_glauber_chain(IsingLadder(2), beta=0.6)
print(f"n = {chain.n}, lambda2 = {chain.lambda2:.6f}, delta = {chain.delta:.6f}")

spec = walk_spectrum(chain)
print(f"phase gap = {spec.phase_gap:.6f} (arccos lambda2 = {np.arccos(chain.lambda2):.6f})")
print(f"busy rank {spec.rank}, complement: {spec.n_sym_complement} at pi, {spec.n_anti_complement} at 0")

###############################################################################
# Filter degree grows like ln(1/eps) / Delta.

for eps, d in filter_degree_curve(spec.phase_gap, [1e-1, 1e-2, 1e-3, 1e-6]):
    print(f"eps = {eps:g}: degree {d}")

filt = synthesize_filter(spec.phase_gap, 1e-3)
theta = np.linspace(-np.pi, np.pi, 9)
print(np.round(filt(theta), 6))

###############################################################################
# The compiled selective phase is within |e^{i phi} - 1| eps of the ideal one.

for phi in (np.pi / 3, np.pi):
    err = gadget_error_norm(build_gadget(spec, filt, phi))
    print(f"phi = {phi:.4f}: error {err:.3e}, bound {abs(np.exp(1j * phi) - 1) * 1e-3:.3e}")
