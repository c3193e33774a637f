"""Qubitized Szegedy walk W = (2 T T^dagger - I) S and its spectral calculus.

Vectors on the doubled register are ``(n, n)`` complex grids ``u[x, y]``
(any leading batch axes are allowed). Nothing here builds an ``n^2 x n^2``
matrix except :func:`dense_walk_matrix`, which exists as a test oracle.

Spectral structure used throughout: with ``D = V diag(lam) V^T`` the
discriminant, the vectors ``a_k = T v_k`` and ``b_k = S T v_k`` span mutually
orthogonal planes with ``<a_k, b_k> = lam_k``. On each plane W is a rotation
with eigenvalues ``exp(+-i arccos lam_k)``. The stationary direction
``a = b = T sqrt(pi)`` collapses to a line with eigenvalue 1. On the
orthogonal complement of all planes W acts as ``-S``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import GapTooSmallError, SizeGuardError, StructuralError
from .markov import MarkovChain

GAP_FLOOR = 1e-12
RANK_TOL = 1e-10
PHASE_SNAP = 1e-12
DENSE_MAX_N = 16

_SQRT_HALF = np.sqrt(0.5)


def lift_state(chain: MarkovChain, v) -> np.ndarray:
    """Apply the step isometry: ``u[x, y] = v[x] sqrt(P[x, y])``."""
    v = np.asarray(v)
    return v[..., :, None] * chain.sqrtP


def unlift_state(chain: MarkovChain, u) -> np.ndarray:
    """Apply T^dagger: ``v[x] = sum_y sqrt(P[x, y]) u[x, y]``."""
    return np.einsum("xy,...xy->...x", chain.sqrtP, u)


def swap(u) -> np.ndarray:
    return np.swapaxes(u, -1, -2)


def apply_walk(chain: MarkovChain, u) -> np.ndarray:
    s = swap(u)
    return 2.0 * lift_state(chain, unlift_state(chain, s)) - s


def apply_walk_adjoint(chain: MarkovChain, u) -> np.ndarray:
    return swap(2.0 * lift_state(chain, unlift_state(chain, u)) - u)


def dense_walk_matrix(chain: MarkovChain) -> np.ndarray:
    """Explicit W with row-major ``(x, y)`` indexing; only for small chains."""
    n = chain.n
    if n > DENSE_MAX_N:
        raise SizeGuardError(f"dense walk matrix limited to n <= {DENSE_MAX_N}, got {n}")
    T = np.zeros((n * n, n))
    for x in range(n):
        T[x * n:(x + 1) * n, x] = chain.sqrtP[x]
    S = np.zeros((n * n, n * n))
    idx = np.arange(n * n)
    S[(idx % n) * n + idx // n, idx] = 1.0
    return (2.0 * T @ T.T - np.eye(n * n)) @ S


def grid_to_json(u) -> str:
    """Row-major list of ``[re, im]`` pairs, for debugging dumps."""
    u = np.asarray(u, dtype=complex)
    return json.dumps({"n": u.shape[-1], "amplitudes": [[z.real, z.imag] for z in u.ravel()]})


@dataclass(frozen=True, eq=False)
class WalkSpectrum:
    """Spectral data of W restricted to the busy subspace, plus complement counts.

    ``lam`` and ``V`` are the discriminant eigenpairs (column ``k`` of ``V`` is
    ``v_k``); ``planar[k]`` marks two-dimensional planes. ``theta_plus`` and
    ``theta_minus`` hold the eigenphase attached to each eigen-coordinate of
    plane ``k`` (equal for the one-dimensional ones).
    """

    chain: MarkovChain
    lam: np.ndarray
    V: np.ndarray
    planar: np.ndarray
    sin: np.ndarray
    theta_plus: np.ndarray
    theta_minus: np.ndarray
    phase_gap: float
    n_sym_complement: int
    n_anti_complement: int
    invariance_residual: float

    @property
    def n(self) -> int:
        return self.chain.n

    @property
    def rank(self) -> int:
        return int(self.n + np.count_nonzero(self.planar))

    @property
    def psi(self) -> np.ndarray:
        """Lifted stationary state T|pi>."""
        return lift_state(self.chain, self.chain.qsample).astype(complex)

    @property
    def busy_phases(self) -> np.ndarray:
        planar = self.planar
        return np.concatenate(
            [self.theta_plus[~planar], self.theta_plus[planar], self.theta_minus[planar]]
        )

    @property
    def complement_phases(self) -> list[float]:
        out = []
        if self.n_anti_complement:
            out.append(0.0)
        if self.n_sym_complement:
            out.append(float(np.pi))
        return out

    def all_phases(self) -> np.ndarray:
        """Busy phases together with the distinct complement phases."""
        return np.concatenate([self.busy_phases, self.complement_phases])

    # Coordinates -----------------------------------------------------------

    def decompose(self, u):
        """Split ``u`` into eigen-coordinates.

        Returns ``(g_plus, g_minus, sym, anti)``: the coefficients of ``u`` on
        the plane eigenvectors ``(a_k +- i e_k)/sqrt(2)`` and the swap-symmetric
        and swap-antisymmetric parts of its component outside the busy subspace.
        """
        chain = self.chain
        u = np.asarray(u, dtype=complex)
        ca = unlift_state(chain, u) @ self.V
        cb = unlift_state(chain, swap(u)) @ self.V
        ce = np.where(self.planar, (cb - self.lam * ca) / self.sin, 0.0)
        gp = (ca - 1j * ce) * _SQRT_HALF
        gm = (ca + 1j * ce) * _SQRT_HALF
        perp = u - self._grid(ca, ce)
        sym = 0.5 * (perp + swap(perp))
        return gp, gm, sym, perp - sym

    def reconstruct(self, gp, gm, sym, anti) -> np.ndarray:
        ra = (gp + gm) * _SQRT_HALF
        re = 1j * (gp - gm) * _SQRT_HALF
        return self._grid(ra, re) + sym + anti

    def _grid(self, ra, re) -> np.ndarray:
        # ra a_k + re e_k with e_k = (b_k - lam_k a_k) / sin_k, rewritten in a/b form.
        beta = np.where(self.planar, re / self.sin, 0.0)
        alpha = ra - self.lam * beta
        chain = self.chain
        return lift_state(chain, alpha @ self.V.T) + swap(lift_state(chain, beta @ self.V.T))

    def busy_basis(self) -> np.ndarray:
        """Materialized orthonormal basis of the busy subspace, shape ``(rank, n, n)``."""
        n = self.n
        eye = np.eye(n)
        vecs = [self._grid(eye[k], np.zeros(n)) for k in range(n)]
        vecs += [self._grid(np.zeros(n), eye[k]) for k in range(n) if self.planar[k]]
        return np.real(np.array(vecs))

    def eigenvectors(self) -> tuple[np.ndarray, np.ndarray]:
        """Busy eigenvectors as grids together with their eigenphases."""
        n = self.n
        eye = np.eye(n)
        zero = np.zeros(n)
        vecs, phases = [], []
        for k in range(n):
            if self.planar[k]:
                vecs.append(self._grid(eye[k] * _SQRT_HALF, 1j * eye[k] * _SQRT_HALF))
                phases.append(self.theta_plus[k])
                vecs.append(self._grid(eye[k] * _SQRT_HALF, -1j * eye[k] * _SQRT_HALF))
                phases.append(self.theta_minus[k])
            else:
                vecs.append(self._grid(eye[k], zero).astype(complex))
                phases.append(self.theta_plus[k])
        return np.array(vecs), np.array(phases)

    def restricted_walk(self) -> np.ndarray:
        """Matrix of W in the busy basis, computed by matrix-free application."""
        Q = self.busy_basis()
        WQ = apply_walk(self.chain, Q)
        return np.einsum("kxy,jxy->kj", Q, WQ)


def walk_spectrum(chain: MarkovChain, certify: bool = True) -> WalkSpectrum:
    """Spectral decomposition of the qubitized walk for ``chain``.

    With ``certify`` the busy subspace is checked to be W-invariant on a few
    random probe vectors (cost O(n^2) each).
    """
    if chain.delta <= GAP_FLOOR:
        raise GapTooSmallError(f"spectral gap {chain.delta:.3g} is below {GAP_FLOOR}")
    n = chain.n
    lam, V = np.linalg.eigh(chain.discriminant())
    root = chain.qsample
    top = int(np.argmax(lam))
    if abs(V[:, top] @ root) < 1.0 - 1e-10:
        raise StructuralError("top discriminant eigenvector is not sqrt(pi)")
    V = V.copy()
    V[:, top] = root
    others = np.arange(n) != top
    V[:, others] -= np.outer(root, root @ V[:, others])
    V[:, others] /= np.linalg.norm(V[:, others], axis=0)
    lam = np.clip(lam, -1.0, 1.0)
    lam[top] = 1.0

    sin = np.sqrt((1.0 - lam) * (1.0 + lam))
    planar = sin > RANK_TOL
    planar[top] = False
    if np.count_nonzero(~planar) != 1:
        # lam = -1 lines mean a periodic chain, which ergodicity excludes.
        raise StructuralError("busy subspace rank inconsistent with an ergodic chain")
    sin = np.where(planar, sin, 1.0)
    theta = np.where(planar, np.arccos(lam), 0.0)
    theta[np.abs(theta) < PHASE_SNAP] = 0.0

    n_planes = int(np.count_nonzero(planar))
    n_sym = n * (n + 1) // 2 - (n_planes + 1)
    n_anti = n * (n - 1) // 2 - n_planes
    nonzero = np.abs(theta[planar])
    candidates = list(nonzero[nonzero > 0])
    if n_sym > 0:
        candidates.append(np.pi)
    gap = float(min(candidates)) if candidates else float(np.pi)

    spec = WalkSpectrum(
        chain=chain,
        lam=lam,
        V=V,
        planar=planar,
        sin=sin,
        theta_plus=theta,
        theta_minus=np.where(planar, -theta, theta),
        phase_gap=gap,
        n_sym_complement=n_sym,
        n_anti_complement=n_anti,
        invariance_residual=float("nan"),
    )
    if certify:
        resid = _invariance_residual(spec)
        if resid > 1e-8:
            raise StructuralError(f"busy subspace not W-invariant (residual {resid:.3g})")
        object.__setattr__(spec, "invariance_residual", resid)
    return spec


def _invariance_residual(spec: WalkSpectrum, probes: int = 8) -> float:
    """Largest out-of-subspace norm of W q over seeded random unit vectors q in B.

    A fixed seed keeps construction deterministic; any direction of B that W
    maps outside B is hit by a random probe with probability one.
    """
    rng = np.random.default_rng(0x5EED)
    n = spec.n
    ra = rng.normal(size=(probes, n))
    re = np.where(spec.planar, rng.normal(size=(probes, n)), 0.0)
    scale = np.sqrt(np.sum(ra**2 + re**2, axis=1, keepdims=True))
    q = spec._grid(ra / scale, re / scale)
    _, _, sym, anti = spec.decompose(apply_walk(spec.chain, q))
    leak = np.sqrt(np.sum(np.abs(sym) ** 2 + np.abs(anti) ** 2, axis=(-1, -2)))
    return float(np.max(leak))


def apply_spectral_function(spec: WalkSpectrum, f, u) -> np.ndarray:
    """Compute f(W) u, with ``f`` a vectorized map from eigenphase to scalar."""
    gp, gm, sym, anti = spec.decompose(u)
    fp = np.broadcast_to(np.asarray(f(spec.theta_plus), dtype=complex), spec.theta_plus.shape)
    fm = np.broadcast_to(np.asarray(f(spec.theta_minus), dtype=complex), spec.theta_minus.shape)
    f0 = complex(np.asarray(f(np.array([0.0])), dtype=complex).ravel()[0])
    fpi = complex(np.asarray(f(np.array([np.pi])), dtype=complex).ravel()[0])
    return spec.reconstruct(fp * gp, fm * gm, fpi * sym, f0 * anti)
