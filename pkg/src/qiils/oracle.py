"""Exact references for small instances.

Statevectors use little-endian qubit order: bit ``j`` of the basis index is
the bit of vertex ``j``, and bit value 1 means spin z = -1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np
import scipy.sparse as sp
from numba import njit
from scipy.sparse.linalg import eigsh

from .graph import Graph, cut_value

__all__ = [
    "OracleResult", "brute_force_maxcut", "diagonal_energies", "exact_expectation",
    "exact_ground_energy", "hamiltonian", "grid_minimize_single_site", "grid_minimum_energies",
    "product_state", "basis_state",
]

MAX_BRUTE_FORCE = 24
MAX_STATEVECTOR = 20
MAX_GROUND = 14


@dataclass
class OracleResult:
    value: float
    witness: Any
    method: str


def brute_force_maxcut(g: Graph, chunk: int = 1 << 18) -> OracleResult:
    """Exhaustive MaxCut with vertex 0 pinned to bit 0."""
    n = g.n
    if n > MAX_BRUTE_FORCE:
        raise ValueError(f"brute force limited to n <= {MAX_BRUTE_FORCE}, got {n}")
    total = 1 << (n - 1)
    best_val, best_k = -math.inf, 0
    shifts = np.arange(n, dtype=np.int64)
    for start in range(0, total, chunk):
        k = np.arange(start, min(start + chunk, total), dtype=np.int64)
        idx = k << 1  # vertex 0 stays 0
        cut = np.zeros(k.size)
        for a, b, w in zip(g.u, g.v, g.w):
            cut += w * (((idx >> shifts[a]) ^ (idx >> shifts[b])) & 1)
        i = int(np.argmax(cut))
        if cut[i] > best_val:
            best_val, best_k = float(cut[i]), int(idx[i])
    witness = ((best_k >> shifts) & 1).astype(np.int8)
    return OracleResult(cut_value(g, witness), witness, "enumeration")


def diagonal_energies(g: Graph) -> np.ndarray:
    """Ising energy of every basis state."""
    if g.n > MAX_STATEVECTOR:
        raise ValueError(f"statevector methods limited to n <= {MAX_STATEVECTOR}")
    idx = np.arange(1 << g.n, dtype=np.int64)
    e = np.zeros(idx.size)
    for a, b, w in zip(g.u, g.v, g.w):
        e += w * (1 - 2 * (((idx >> a) ^ (idx >> b)) & 1))
    return e


def _x_expectations(psi: np.ndarray, n: int) -> np.ndarray:
    out = np.empty(n)
    for j in range(n):
        view = psi.reshape(1 << (n - 1 - j), 2, 1 << j)
        out[j] = 2.0 * np.real(np.vdot(view[:, 0, :], view[:, 1, :]))
    return out


def exact_expectation(g: Graph, lam: float, state) -> float:
    """<state| (1-lam)(-sum X) + lam * sum w ZZ |state>, matrix free."""
    psi = np.asarray(state)
    if psi.shape != (1 << g.n,):
        raise ValueError(f"state must have 2**{g.n} amplitudes")
    norm = float(np.vdot(psi, psi).real)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"state not normalised (norm^2 = {norm})")
    diag = float(np.dot(np.abs(psi) ** 2, diagonal_energies(g)))
    x = float(np.sum(_x_expectations(psi, g.n)))
    return lam * diag - (1.0 - lam) * x


def hamiltonian(g: Graph, lam: float) -> sp.csr_matrix:
    n = g.n
    dim = 1 << n
    idx = np.arange(dim, dtype=np.int64)
    rows = [idx]
    cols = [idx]
    vals = [lam * diagonal_energies(g)]
    for j in range(n):
        rows.append(idx)
        cols.append(idx ^ (1 << j))
        vals.append(np.full(dim, -(1.0 - lam)))
    return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                         shape=(dim, dim))


def exact_ground_energy(g: Graph, lam: float) -> float:
    n = g.n
    if n > MAX_GROUND:
        raise ValueError(f"exact ground energy limited to n <= {MAX_GROUND}, got {n}")
    if lam == 1.0:
        return float(diagonal_energies(g).min())
    if lam == 0.0:
        return -float(n)
    H = hamiltonian(g, lam)
    if n <= 8:
        return float(np.linalg.eigvalsh(H.toarray())[0])
    v0 = np.full(H.shape[0], 1.0 / math.sqrt(H.shape[0]))
    vals = eigsh(H, k=1, which="SA", v0=v0, tol=0, maxiter=100_000,
                 return_eigenvectors=False)
    return float(vals[0])


def grid_minimize_single_site(A: float, B: float, points: int = 100_000) -> float:
    if points < 2:
        raise ValueError("need at least two grid points")
    t = np.linspace(0.0, math.pi / 2, points)
    return float(t[np.argmin(A * np.cos(2 * t) - B * np.sin(2 * t))])


@njit(cache=True)
def _grid_min(A, B, c, s, out):
    for i in range(A.size):
        best = np.inf
        for k in range(c.size):
            e = A[i] * c[k] - B[i] * s[k]
            if e < best:
                best = e
        out[i] = best


def grid_minimum_energies(A, B, points: int = 100_000) -> np.ndarray:
    """Minimum of ``A cos 2t - B sin 2t`` over a uniform grid on [0, pi/2],
    for each pair ``(A[i], B[i])``."""
    if points < 2:
        raise ValueError("need at least two grid points")
    A = np.ascontiguousarray(A, dtype=float)
    B = np.ascontiguousarray(B, dtype=float)
    if A.shape != B.shape or A.ndim != 1:
        raise ValueError("A and B must be 1-d arrays of equal length")
    t = np.linspace(0.0, math.pi / 2, points)
    out = np.empty(A.size)
    _grid_min(A, B, np.cos(2 * t), np.sin(2 * t), out)
    return out


def product_state(theta) -> np.ndarray:
    psi = np.ones(1)
    for t in theta:  # vertex 0 ends up least significant
        psi = np.kron(np.array([math.cos(t), math.sin(t)]), psi)
    return psi


def basis_state(bits) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.int64)
    psi = np.zeros(1 << bits.size)
    psi[int(np.sum(bits << np.arange(bits.size)))] = 1.0
    return psi
