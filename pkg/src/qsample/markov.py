"""Reversible Markov chains and heat-bath Glauber dynamics on Ising ladders.

Spin configurations are encoded as integers: bit ``s`` of the state index is
0 when spin ``s`` points up and 1 when it points down, so state 0 is all-up.
The energy is the number of unsatisfied (anti-aligned) bonds, a nonnegative
integer.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np
from scipy import linalg
from scipy.special import expit

from .errors import InvalidParameterError, NumericFailureError, ReversibilityError

ROW_SUM_TOL = 1e-12
STATIONARY_TOL = 1e-10
BALANCE_TOL = 1e-10
DENSE_LIMIT = 4096


@dataclass(frozen=True, eq=False)
class MarkovChain:
    """A validated reversible ergodic chain with its spectral summary.

    Use :meth:`from_matrix` rather than the constructor; it computes ``pi``
    and the gap and checks every invariant.
    """

    P: np.ndarray
    pi: np.ndarray
    lambda2: float
    delta: float
    name: str = field(default="", compare=False)

    @property
    def n(self) -> int:
        return self.P.shape[0]

    @classmethod
    def from_matrix(cls, P, pi=None, name: str = "") -> "MarkovChain":
        P = np.array(P, dtype=float)
        _check_stochastic(P)
        if pi is None:
            pi = stationary_distribution(P)
        else:
            pi = np.asarray(pi, dtype=float)
            pi = pi / pi.sum()
        residual = np.max(np.abs(pi @ P - pi))
        if residual > STATIONARY_TOL:
            raise InvalidParameterError(f"pi is not stationary for P (residual {residual:.3g})")
        P.setflags(write=False)
        pi.setflags(write=False)
        lam2, delta = _gap(P, pi)
        return cls(P=P, pi=pi, lambda2=lam2, delta=delta, name=name)

    @property
    def qsample(self) -> np.ndarray:
        """Amplitudes sqrt(pi(x)) of the coherent encoding of pi."""
        return np.sqrt(self.pi)

    @cached_property
    def sqrtP(self) -> np.ndarray:
        return np.sqrt(self.P)

    def balance_residual(self) -> float:
        flow = self.pi[:, None] * self.P
        return float(np.max(np.abs(flow - flow.T)))

    def discriminant(self) -> np.ndarray:
        """D(x, y) = sqrt(P(x, y) P(y, x)); symmetric, cospectral with P when reversible."""
        return np.sqrt(self.P * self.P.T)

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "P": self.P.tolist(), "pi": self.pi.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "MarkovChain":
        try:
            n = int(data["n"])
            P = np.asarray(data["P"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameterError(f"malformed chain record: {exc}") from exc
        if P.shape != (n, n):
            raise InvalidParameterError(f"P has shape {P.shape}, expected ({n}, {n})")
        return cls.from_matrix(P, data.get("pi"))

    @classmethod
    def from_json(cls, text: str) -> "MarkovChain":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidParameterError(
                f"chain file is not valid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}"
            ) from exc
        return cls.from_dict(data)


def _check_stochastic(P: np.ndarray) -> None:
    if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] < 1:
        raise InvalidParameterError(f"transition matrix must be square, got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise InvalidParameterError("transition matrix has non-finite entries")
    if np.any(P < 0):
        raise InvalidParameterError("transition matrix has negative entries")
    rows = np.abs(P.sum(axis=1) - 1.0)
    if np.max(rows) > ROW_SUM_TOL:
        bad = int(np.argmax(rows))
        raise InvalidParameterError(f"row {bad} sums to {float(P[bad].sum()):.17g}, not 1")


def stationary_distribution(P, max_iter: int = 1_000_000, tol: float = 1e-14) -> np.ndarray:
    """Left Perron vector of an irreducible aperiodic stochastic matrix, summing to 1."""
    P = np.asarray(P, dtype=float)
    n = P.shape[0]
    if n <= DENSE_LIMIT:
        w, vl = linalg.eig(P, left=True, right=False)
        k = int(np.argmin(np.abs(w - 1.0)))
        if abs(w[k] - 1.0) > 1e-8:
            raise NumericFailureError(f"no eigenvalue near 1 (closest {complex(w[k])})")
        v = np.real(vl[:, k])
        v = v / v.sum()
    else:
        v = np.full(n, 1.0 / n)
        for _ in range(max_iter):
            nxt = v @ P
            if np.max(np.abs(nxt - v)) < tol:
                v = nxt
                break
            v = nxt
        else:
            raise NumericFailureError("power iteration did not converge")
    if np.any(v <= 0):
        raise NumericFailureError("stationary vector is not entrywise positive; chain not ergodic?")
    # One refinement sweep tightens the fixed-point residual.
    v = v @ P
    return v / v.sum()


def _gap(P: np.ndarray, pi: np.ndarray) -> tuple[float, float]:
    flow = pi[:, None] * P
    residual = float(np.max(np.abs(flow - flow.T)))
    if residual > BALANCE_TOL:
        raise ReversibilityError(f"detailed balance violated (max residual {residual:.3g})")
    if P.shape[0] == 1:
        return 0.0, 1.0
    ev = np.linalg.eigvalsh(np.sqrt(P * P.T))
    lam2 = float(ev[-2])
    return lam2, 1.0 - lam2


def spectral_gap(chain: MarkovChain) -> tuple[float, float]:
    """Return ``(lambda2, delta)`` from a dense symmetric eigensolve of the discriminant.

    Raises ReversibilityError when detailed balance fails, since the spectrum
    is then not guaranteed to be real.
    """
    return _gap(chain.P, chain.pi)


def lazify(chain: MarkovChain) -> MarkovChain:
    P = 0.5 * (np.eye(chain.n) + chain.P)
    return MarkovChain.from_matrix(P, chain.pi, name=f"lazy({chain.name})" if chain.name else "")


def random_reversible_chain(n: int, rng: np.random.Generator, density: float = 1.0) -> MarkovChain:
    """Random reversible chain from a symmetric positive weight graph.

    P(x, y) = w(x, y) / sum_y w(x, y) has stationary law proportional to the
    weighted degree. A positive diagonal keeps the chain aperiodic.
    """
    w = rng.random((n, n))
    if density < 1.0:
        w = w * (rng.random((n, n)) < density)
    w = np.triu(w, 1)
    w = w + w.T + np.diag(rng.random(n) + 0.1)
    # Chain links guarantee irreducibility when the graph is sparse.
    idx = np.arange(n - 1)
    w[idx, idx + 1] += 0.05
    w[idx + 1, idx] += 0.05
    deg = w.sum(axis=1)
    return MarkovChain.from_matrix(w / deg[:, None], deg / deg.sum())


def resampling_chain(target: np.ndarray, delta: float) -> MarkovChain:
    """P = (1 - delta) I + delta 1 target^T: hold, or redraw from ``target``.

    Reversible for any target; spectrum {1, 1 - delta}. Handy for sweeping
    overlap and gap independently.
    """
    target = np.asarray(target, dtype=float)
    target = target / target.sum()
    n = target.size
    P = (1.0 - delta) * np.eye(n) + delta * np.ones((n, 1)) * target[None, :]
    return MarkovChain.from_matrix(P, target)


@dataclass(frozen=True)
class IsingLadder:
    """Open-boundary 2 x cols ferromagnetic ladder with unit coupling."""

    cols: int
    rows: int = 2

    def __post_init__(self):
        if self.rows != 2:
            raise InvalidParameterError("only two-row ladders are supported")
        if self.cols < 1:
            raise InvalidParameterError("ladder needs at least one column")

    @property
    def n_spins(self) -> int:
        return self.rows * self.cols

    @property
    def n_states(self) -> int:
        return 1 << self.n_spins

    @property
    def bonds(self) -> list[tuple[int, int]]:
        c = self.cols
        rungs = [(j, c + j) for j in range(c)]
        rails = [(r * c + j, r * c + j + 1) for r in range(2) for j in range(c - 1)]
        return rungs + rails

    @property
    def n_bonds(self) -> int:
        return len(self.bonds)

    def energies(self) -> np.ndarray:
        """Unsatisfied-bond count for every configuration, indexed by state."""
        x = np.arange(self.n_states)
        H = np.zeros(self.n_states, dtype=np.int64)
        for a, b in self.bonds:
            H += ((x >> a) ^ (x >> b)) & 1
        return H

    def energy(self, spins) -> int:
        """H for a +/-1 spin vector (site order: top row, then bottom row)."""
        s = np.asarray(spins)
        return int(sum(s[a] != s[b] for a, b in self.bonds))

    @classmethod
    def parse(cls, text: str) -> "IsingLadder":
        """Parse a ``"2x4"`` style size string."""
        try:
            r, c = (int(t) for t in text.lower().split("x"))
        except ValueError as exc:
            raise InvalidParameterError(f"ladder size must look like 2xC, got {text!r}") from exc
        return cls(cols=c, rows=r)


def gibbs_weights(ladder: IsingLadder, beta: float) -> np.ndarray:
    H = ladder.energies()
    w = np.exp(-beta * (H - H.min()))
    return w / w.sum()


def build_glauber_chain(ladder: IsingLadder, beta: float, lazy: bool = True) -> MarkovChain:
    """Random-scan single-site heat-bath dynamics at inverse temperature ``beta``.

    Each step picks a site uniformly and resamples it from its conditional
    Gibbs law; with ``lazy`` the kernel is averaged with the identity.
    """
    if not math.isfinite(beta) or beta < 0:
        raise InvalidParameterError(f"beta must be finite and nonnegative, got {beta!r}")
    H = ladder.energies().astype(float)
    n, N = ladder.n_states, ladder.n_spins
    x = np.arange(n)
    G = np.zeros((n, n))
    for s in range(N):
        y = x ^ (1 << s)
        p_move = expit(-beta * (H[y] - H))
        G[x, y] += p_move / N
        G[x, x] += (1.0 - p_move) / N
    if lazy:
        G = 0.5 * (np.eye(n) + G)
    tag = f"glauber 2x{ladder.cols} beta={beta:g}" + (" lazy" if lazy else "")
    return MarkovChain.from_matrix(G, gibbs_weights(ladder, beta), name=tag)
