"""Product-state energy of the interpolated Hamiltonian and local fields.

For the product state with amplitudes ``cos(theta_j)|0> + sin(theta_j)|1>``
one has <Z_j> = cos 2theta_j and <X_j> = sin 2theta_j, so the expectation of
``(1 - lam) * (-sum X_j) + lam * sum w_jk Z_j Z_k`` is

    E = lam * sum_edges w cos2theta_u cos2theta_v - (1 - lam) * sum_j sin2theta_j

Sweeps only need the local field ``a_j = sum_k w_jk cos2theta_k`` of every
vertex, which :class:`FieldCache` keeps current under single-angle changes.
"""
from __future__ import annotations

import math

import numpy as np

from . import _kernels
from .graph import Graph

__all__ = ["ps_energy", "local_field", "local_fields", "FieldCache", "cache_update",
           "single_site_energy"]


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    return lam


def _angles(g: Graph, theta) -> np.ndarray:
    th = np.asarray(theta, dtype=float)
    if th.shape != (g.n,):
        raise ValueError(f"expected {g.n} angles, got shape {th.shape}")
    return th


def ps_energy(g: Graph, lam: float, theta) -> float:
    lam = _check_lambda(lam)
    th = _angles(g, theta)
    c = np.cos(2 * th)
    zz = math.fsum(g.w * c[g.u] * c[g.v])
    x = math.fsum(np.sin(2 * th))
    return lam * zz - (1.0 - lam) * x


def local_field(g: Graph, theta, j: int) -> float:
    th = _angles(g, theta)
    if not 0 <= j < g.n:
        raise IndexError(f"vertex {j} out of range")
    idx, ws = g.neighbors(j)
    return float(math.fsum(ws * np.cos(2 * th[idx])))


def local_fields(g: Graph, theta) -> np.ndarray:
    """All local fields from scratch (compensated per vertex)."""
    c = np.cos(2 * _angles(g, theta))
    terms = g.weights * c[g.indices]
    return np.array([math.fsum(terms[g.indptr[j]:g.indptr[j + 1]]) for j in range(g.n)])


def single_site_energy(A: float, B: float, theta_j):
    return A * np.cos(2 * theta_j) - B * np.sin(2 * theta_j)


class FieldCache:
    """Local fields ``a`` and ``cos(2 theta)`` for one angle vector.

    Single writer: whoever owns the angle vector owns the cache.
    """

    def __init__(self, g: Graph, theta):
        self.g = g
        self.c = np.cos(2 * _angles(g, theta))
        self.a = np.empty(g.n)
        # incremental updates since the last full refresh, shared with kernels
        self.counter = np.zeros(1, dtype=np.int64)
        self.refresh()

    def refresh(self) -> None:
        g = self.g
        _kernels.fields(g.indptr, g.indices, g.weights, self.c, self.a)
        self.counter[0] = 0

    def reset(self, theta) -> None:
        self.c[:] = np.cos(2 * _angles(self.g, theta))
        self.refresh()

    def update(self, j: int, old_theta: float, new_theta: float) -> None:
        if new_theta == old_theta:
            return
        c_new = math.cos(2.0 * new_theta)
        idx, ws = self.g.neighbors(j)
        self.a[idx] += ws * (c_new - self.c[j])
        self.c[j] = c_new
        self.counter[0] += 1
        if self.counter[0] >= _kernels.REFRESH_EVERY:
            self.refresh()

    def drift(self, theta) -> float:
        """Max abs deviation of the cached fields from a compensated recompute."""
        return float(np.max(np.abs(self.a - local_fields(self.g, theta)), initial=0.0))


def cache_update(cache: FieldCache, g: Graph, j: int, old_theta: float, new_theta: float) -> None:
    if cache.g is not g:
        raise ValueError("cache belongs to a different graph")
    cache.update(j, old_theta, new_theta)
