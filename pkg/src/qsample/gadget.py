"""One-ancilla selective-phase gadget C^dagger (P_phi x I) C and the walk oracle.

C is realized exactly rather than as a gate sequence: on the eigenspace of W
with phase theta it is the 2x2 unitary ``[[u, -w], [w, conj(u)]]`` with
``u = filter(theta)`` and ``w = sqrt(1 - |u|^2)``, so the gadget is the
per-phase block ``M_theta = C_theta^dagger diag(e^{i phi}, 1) C_theta``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GapMismatchError
from .filters import ChebyshevFilter, eval_filter, indicator_filter
from .markov import MarkovChain
from .walk import WalkSpectrum, lift_state

QUERIES_PER_CONTROLLED_W = 2
CONJUGATION_OVERHEAD = 2


def conjugated_gadget_queries(d: int, conjugation_overhead: int = CONJUGATION_OVERHEAD) -> int:
    """Oracle calls for one conjugated gadget with a degree-``d`` filter.

    C and C^dagger each use ``d`` controlled walks at two queries apiece; the
    O, O^dagger conjugation adds ``conjugation_overhead``.
    """
    return 2 * d * QUERIES_PER_CONTROLLED_W + conjugation_overhead


@dataclass(frozen=True, eq=False)
class JointState:
    """Ancilla qubit tensored with the doubled register, as two grids."""

    anc0: np.ndarray
    anc1: np.ndarray

    @classmethod
    def embed(cls, v) -> "JointState":
        """|0>_a |v> |0>_w, with ``v`` a system-register vector."""
        v = np.asarray(v, dtype=complex)
        grid = np.zeros(v.shape + (v.shape[-1],), dtype=complex)
        grid[..., 0] = v
        return cls(grid, np.zeros_like(grid))

    @classmethod
    def from_grid(cls, u) -> "JointState":
        u = np.asarray(u, dtype=complex)
        return cls(u, np.zeros_like(u))

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.anc0) ** 2) + np.sum(np.abs(self.anc1) ** 2)))

    def inner(self, other: "JointState") -> complex:
        return complex(np.vdot(self.anc0, other.anc0) + np.vdot(self.anc1, other.anc1))

    def __sub__(self, other: "JointState") -> "JointState":
        return JointState(self.anc0 - other.anc0, self.anc1 - other.anc1)


def _blocks(upsilon, phi: float):
    """Entries (m00, m01, m10, m11) of M_theta for filter values ``upsilon``."""
    u = np.asarray(upsilon, dtype=complex)
    a2 = np.abs(u) ** 2
    w = np.sqrt(np.clip(1.0 - a2, 0.0, None))
    e = np.exp(1j * phi)
    return (e * a2 + w * w, np.conj(u) * w * (1 - e), u * w * (1 - e), e * w * w + a2)


@dataclass(frozen=True, eq=False)
class SelectivePhaseGadget:
    spec: WalkSpectrum
    filter: ChebyshevFilter | None
    phi: float

    @property
    def degree(self) -> int:
        return self.filter.d if self.filter is not None else 0

    @property
    def queries(self) -> int:
        return conjugated_gadget_queries(self.degree)

    def upsilon(self, theta):
        if self.filter is None:
            return indicator_filter(theta)
        return eval_filter(self.filter, theta)

    def block(self, theta) -> np.ndarray:
        """The 2x2 unitary M_theta (stacked along leading axes for array input)."""
        m00, m01, m10, m11 = _blocks(self.upsilon(theta), self.phi)
        return np.stack([np.stack([m00, m01], -1), np.stack([m10, m11], -1)], -2)

    @property
    def per_phase_blocks(self) -> dict[float, np.ndarray]:
        phases = np.unique(np.round(self.spec.all_phases(), 14))
        return {float(t): self.block(t) for t in phases}


def build_gadget(spec: WalkSpectrum, filt: ChebyshevFilter | None, phi: float) -> SelectivePhaseGadget:
    """Gadget for ``spec``; ``filt=None`` selects the exact projector."""
    if filt is not None and filt.Delta > spec.phase_gap * (1 + 1e-12):
        raise GapMismatchError(
            f"filter gap {filt.Delta:.6g} exceeds walk phase gap {spec.phase_gap:.6g}"
        )
    return SelectivePhaseGadget(spec=spec, filter=filt, phi=float(phi))


def apply_gadget(g: SelectivePhaseGadget, s: JointState) -> JointState:
    spec = g.spec
    p0, m0, sym0, anti0 = spec.decompose(s.anc0)
    p1, m1, sym1, anti1 = spec.decompose(s.anc1)

    def mix(theta, c0, c1):
        b00, b01, b10, b11 = _blocks(g.upsilon(theta), g.phi)
        return b00 * c0 + b01 * c1, b10 * c0 + b11 * c1

    np0, np1 = mix(spec.theta_plus, p0, p1)
    nm0, nm1 = mix(spec.theta_minus, m0, m1)
    ns0, ns1 = mix(np.pi, sym0, sym1)
    na0, na1 = mix(0.0, anti0, anti1)
    return JointState(
        spec.reconstruct(np0, nm0, ns0, na0),
        spec.reconstruct(np1, nm1, ns1, na1),
    )


def ideal_selective_phase(pi: np.ndarray, phi: float, v) -> np.ndarray:
    """S_phi(|pi><pi|) applied to system vector(s) ``v`` (pi given as a distribution)."""
    root = np.sqrt(pi)
    v = np.asarray(v, dtype=complex)
    return v + (np.exp(1j * phi) - 1) * (v @ root)[..., None] * root


def _largest_singular(diff: JointState) -> float:
    cols0 = diff.anc0.reshape(diff.anc0.shape[0], -1)
    cols1 = diff.anc1.reshape(diff.anc1.shape[0], -1)
    gram = np.conj(cols0) @ cols0.T + np.conj(cols1) @ cols1.T
    top = np.linalg.eigvalsh(0.5 * (gram + gram.conj().T))[-1]
    return float(np.sqrt(max(top, 0.0)))


def gadget_error_norm(g: SelectivePhaseGadget) -> float:
    """|| S~ (|0> x I) T - (|0> x I) T S_phi(Pi_pi) || over the system space."""
    chain = g.spec.chain
    eye = np.eye(chain.n, dtype=complex)
    out = apply_gadget(g, JointState.from_grid(lift_state(chain, eye)))
    ideal = JointState.from_grid(lift_state(chain, ideal_selective_phase(chain.pi, g.phi, eye)))
    return _largest_singular(out - ideal)


@dataclass(frozen=True, eq=False)
class OracleUnitary:
    """O_P = sum_x |x><x| (x) U_x with U_x |0> = |p_x>, built from Householder reflections.

    Each U_x is a product of at most two reflections ``I - c v v^T``; rows
    with one reflection carry ``c = 0`` in the second slot.
    """

    chain: MarkovChain
    v1: np.ndarray
    c1: np.ndarray
    v2: np.ndarray
    c2: np.ndarray

    def _reflect(self, u, v, c):
        return u - (c * np.einsum("xy,...xy->...x", v, u))[..., None] * v

    def apply(self, u) -> np.ndarray:
        return self._reflect(self._reflect(u, self.v1, self.c1), self.v2, self.c2)

    def apply_adjoint(self, u) -> np.ndarray:
        return self._reflect(self._reflect(u, self.v2, self.c2), self.v1, self.c1)

    def row_unitary(self, x: int) -> np.ndarray:
        n = self.chain.n
        H1 = np.eye(n) - self.c1[x] * np.outer(self.v1[x], self.v1[x])
        H2 = np.eye(n) - self.c2[x] * np.outer(self.v2[x], self.v2[x])
        return H2 @ H1


def _householder(src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, float]:
    v = src - dst
    nv = v @ v
    return v, (0.0 if nv < 1e-30 else 2.0 / nv)


def build_oracle_unitary(chain: MarkovChain) -> OracleUnitary:
    n = chain.n
    e0 = np.zeros(n)
    e0[0] = 1.0
    e1 = np.zeros(n)
    e1[min(1, n - 1)] = 1.0
    v1 = np.zeros((n, n))
    v2 = np.zeros((n, n))
    c1 = np.zeros(n)
    c2 = np.zeros(n)
    for x in range(n):
        p = chain.sqrtP[x]
        if p[0] < -1.0 + 1e-12:
            # Antipodal target: route through an intermediate basis state.
            v1[x], c1[x] = _householder(e0, e1)
            v2[x], c2[x] = _householder(e1, p)
        else:
            v1[x], c1[x] = _householder(e0, p)
    return OracleUnitary(chain=chain, v1=v1, c1=c1, v2=v2, c2=c2)


def apply_conjugated_gadget(g: SelectivePhaseGadget, O: OracleUnitary, s: JointState) -> JointState:
    """(I_a x O^dagger) S~_phi (I_a x O) on a joint state."""
    inner = JointState(O.apply(s.anc0), O.apply(s.anc1))
    out = apply_gadget(g, inner)
    return JointState(O.apply_adjoint(out.anc0), O.apply_adjoint(out.anc1))


def conjugated_error_norm(g: SelectivePhaseGadget, O: OracleUnitary) -> float:
    """Same norm as :func:`gadget_error_norm` for the oracle-conjugated gadget on clean workspace."""
    chain = g.spec.chain
    eye = np.eye(chain.n, dtype=complex)
    out = apply_conjugated_gadget(g, O, JointState.embed(eye))
    ideal = JointState.embed(ideal_selective_phase(chain.pi, g.phi, eye))
    return _largest_singular(out - ideal)
