"""Annealing-schedule baselines: LQA on product-state angles and GCS on a
dense statevector.

Both discretise the schedule ``H(s) = (1 - s) H_i + s * gamma * H_f`` with
``s = k / M`` for ``k = 1..M`` and take one descent step per point.
GCS uses ``gamma = 1``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .energy import FieldCache
from .graph import Graph
from .solver import IterationRecord, RunTrace, SolverConfig, random_angles, round_to_bits

__all__ = [
    "LqaConfig", "lqa_energy", "lqa_gradient", "run_lqa",
    "GcsParams", "gcs_state", "gcs_energy", "gcs_z_expectations", "run_gcs", "run_config",
]

MAX_GCS_QUBITS = 20
MAX_GCS_RUN = 16


def _records(g: Graph, cuts: np.ndarray, ms: float) -> list[IterationRecord]:
    best = np.maximum.accumulate(cuts)
    return [IterationRecord(k + 1, float(cuts[k]), float(best[k]),
                            g.total_weight - 2 * float(best[k]), 1, ms)
            for k in range(cuts.size)]


# ------------------------------------------------------------------------ LQA

@dataclass
class LqaConfig:
    gamma: float = 0.5
    eta: float = 0.5
    steps: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if not self.eta > 0:
            raise ValueError("eta must be positive")


def lqa_energy(g: Graph, s: float, gamma: float, theta) -> float:
    th = np.asarray(theta, dtype=float)
    c = np.cos(2 * th)
    return -(1.0 - s) * math.fsum(np.sin(2 * th)) + s * gamma * math.fsum(g.w * c[g.u] * c[g.v])


def lqa_gradient(g: Graph, s: float, gamma: float, theta) -> np.ndarray:
    th = np.asarray(theta, dtype=float)
    cache = FieldCache(g, th)
    return -2.0 * (1.0 - s) * cache.c - 2.0 * s * gamma * cache.a * np.sin(2 * th)


def run_lqa(g: Graph, cfg: LqaConfig) -> RunTrace:
    """One annealing pass of ``cfg.steps`` clipped gradient steps.

    Record ``k`` holds the rounded cut after step ``k`` in ``cut`` and the
    best so far in ``best_cut``; ``best_bits`` is the best rounded state.
    """
    rng = np.random.default_rng(cfg.seed)
    theta = random_angles(g.n, rng)
    cache = FieldCache(g, theta)
    cuts = np.empty(cfg.steps)
    best_theta = theta.copy()
    t0 = time.perf_counter()
    _kernels.lqa_anneal(g.indptr, g.indices, g.weights, g.u, g.v, g.w, float(cfg.gamma),
                        float(cfg.eta), int(cfg.steps), theta, cache.c, cache.a, cuts, best_theta)
    ms = (time.perf_counter() - t0) * 1e3 / cfg.steps
    trace = RunTrace(algo="lqa", seed=cfg.seed, total_weight=g.total_weight)
    trace.records = _records(g, cuts, ms)
    trace.best_bits = round_to_bits(best_theta)
    return trace


# ------------------------------------------------------------------------ GCS

@dataclass
class GcsParams:
    """Rotation layers ``x``, ``y`` (n x 3, columns X, Y, Z) and the
    symmetric zero-diagonal coupling matrix ``B``."""
    x: np.ndarray
    y: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        self.B = np.asarray(self.B, dtype=float)
        n = self.x.shape[0]
        if self.x.shape != (n, 3) or self.y.shape != (n, 3) or self.B.shape != (n, n):
            raise ValueError("GCS parameter shapes must be (n,3), (n,3), (n,n)")
        if not np.allclose(self.B, self.B.T, rtol=0, atol=0) or np.any(np.diag(self.B) != 0):
            raise ValueError("B must be symmetric with zero diagonal")

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @classmethod
    def zeros(cls, n: int) -> "GcsParams":
        return cls(np.zeros((n, 3)), np.zeros((n, 3)), np.zeros((n, n)))

    def to_vector(self) -> np.ndarray:
        iu = np.triu_indices(self.n, 1)
        return np.concatenate([self.x.ravel(), self.y.ravel(), self.B[iu]])

    @classmethod
    def from_vector(cls, vec: np.ndarray, n: int) -> "GcsParams":
        x = vec[:3 * n].reshape(n, 3)
        y = vec[3 * n:6 * n].reshape(n, 3)
        B = np.zeros((n, n))
        iu = np.triu_indices(n, 1)
        B[iu] = vec[6 * n:]
        return cls(x, y, B + B.T)


_PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]])


def _rotation(v: np.ndarray) -> np.ndarray:
    """exp(-i v . sigma) in closed form."""
    r = math.sqrt(float(v @ v))
    if r == 0.0:
        return np.eye(2, dtype=complex)
    gen = np.tensordot(v / r, _PAULI, axes=1)
    return math.cos(r) * np.eye(2) - 1j * math.sin(r) * gen


def _apply_layer(psi: np.ndarray, layer: np.ndarray, n: int) -> np.ndarray:
    for j in range(n):
        U = _rotation(layer[j])
        view = psi.reshape(1 << (n - 1 - j), 2, 1 << j)
        psi = np.einsum("ab,ibk->iak", U, view).reshape(-1)
    return psi


def _spins(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    return 1 - 2 * ((idx[:, None] >> np.arange(n)) & 1)


def gcs_state(params: GcsParams, n: int | None = None, spins: np.ndarray | None = None) -> np.ndarray:
    """U(y) V(B) U(x) |+>^n as a dense vector (little-endian qubits)."""
    n = params.n if n is None else n
    if n != params.n:
        raise ValueError("parameter size does not match n")
    if n > MAX_GCS_QUBITS:
        raise ValueError(f"GCS statevector limited to n <= {MAX_GCS_QUBITS}")
    z = _spins(n) if spins is None else spins
    psi = np.full(1 << n, (1 << n) ** -0.5, dtype=complex)
    psi = _apply_layer(psi, params.x, n)
    # sum_{j != k} B_jk z_j z_k = z^T B z for zero diagonal
    phase = np.einsum("ij,jk,ik->i", z, params.B, z)
    psi = psi * np.exp(-1j * phase)
    return _apply_layer(psi, params.y, n)


def gcs_z_expectations(psi: np.ndarray, n: int) -> np.ndarray:
    prob = np.abs(psi) ** 2
    return prob @ _spins(n)


def _x_total(psi: np.ndarray, n: int) -> float:
    tot = 0.0
    for j in range(n):
        view = psi.reshape(1 << (n - 1 - j), 2, 1 << j)
        tot += 2.0 * np.real(np.vdot(view[:, 0, :], view[:, 1, :]))
    return tot


def _diag_energies(g: Graph, z: np.ndarray) -> np.ndarray:
    return (z[:, g.u] * z[:, g.v]) @ g.w


def gcs_energy(g: Graph, s: float, psi: np.ndarray, diag: np.ndarray | None = None) -> float:
    """<psi| (1 - s)(-sum X) + s H_f |psi>."""
    if diag is None:
        diag = _diag_energies(g, _spins(g.n))
    return s * float(np.abs(psi) ** 2 @ diag) - (1.0 - s) * _x_total(psi, g.n)


def run_gcs(g: Graph, steps: int = 100, step_size: float = 0.1, seed: int = 0,
            init_scale: float = 1e-2, h: float = 1e-5) -> RunTrace:
    """Steepest descent along the schedule with central-difference gradients.

    All-zero parameters are a stationary point of every ``H(s)`` (the
    gradient vanishes identically there), so parameters start at
    ``init_scale`` times standard normal noise.
    """
    n = g.n
    if n > MAX_GCS_RUN:
        raise ValueError(f"GCS runs limited to n <= {MAX_GCS_RUN}, got {n}")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    rng = np.random.default_rng(seed)
    z = _spins(n)
    diag = _diag_energies(g, z)
    vec = init_scale * rng.standard_normal(6 * n + n * (n - 1) // 2)

    def energy(v, s):
        return gcs_energy(g, s, gcs_state(GcsParams.from_vector(v, n), n, z), diag)

    cuts = np.empty(steps)
    best_bits, best = None, -math.inf
    t0 = time.perf_counter()
    for k in range(1, steps + 1):
        s = k / steps
        grad = np.empty_like(vec)
        for i in range(vec.size):
            e = np.zeros_like(vec)
            e[i] = h
            grad[i] = (energy(vec + e, s) - energy(vec - e, s)) / (2 * h)
        vec = vec - step_size * grad
        zexp = gcs_z_expectations(gcs_state(GcsParams.from_vector(vec, n), n, z), n)
        bits = (zexp < 0).astype(np.int8)
        cuts[k - 1] = float(np.sum(g.w[bits[g.u] != bits[g.v]]))
        if cuts[k - 1] > best:
            best, best_bits = cuts[k - 1], bits
    ms = (time.perf_counter() - t0) * 1e3 / steps
    trace = RunTrace(algo="gcs", seed=seed, total_weight=g.total_weight)
    trace.records = _records(g, cuts, ms)
    trace.best_bits = best_bits
    return trace


def run_config(g: Graph, cfg: SolverConfig) -> RunTrace:
    """Dispatch a SolverConfig; the schedule length M is ``sweep_budget``,
    falling back to ``max_sweeps``."""
    if cfg.algo == "lqa":
        return run_lqa(g, LqaConfig(cfg.gamma, cfg.eta, cfg.sweep_budget or cfg.max_sweeps, cfg.seed))
    if cfg.algo == "gcs":
        return run_gcs(g, cfg.sweep_budget or cfg.max_sweeps, cfg.step_size, cfg.seed)
    raise ValueError(f"{cfg.algo!r} is not a baseline")
