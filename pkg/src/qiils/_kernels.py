"""Compiled inner loops. Every kernel works on the CSR arrays of a Graph.

Kernels that come in a ``_par`` flavour are data parallel over vertices; each
output element is computed by the same arithmetic in both flavours, so the
results are bitwise identical regardless of the thread count.
"""
import math

import numpy as np
from numba import njit, prange

QUARTER_PI = math.pi / 4
HALF_PI = math.pi / 2
# full field recomputation after this many incremental updates
REFRESH_EVERY = 10_000


def _fields(indptr, indices, weights, cos2, out):
    n = indptr.size - 1
    for j in prange(n):
        acc = 0.0
        for idx in range(indptr[j], indptr[j + 1]):
            acc += weights[idx] * cos2[indices[idx]]
        out[j] = acc


fields = njit(cache=True, nogil=True)(_fields)
fields_par = njit(cache=True, nogil=True, parallel=True)(_fields)


@njit(cache=True, nogil=True)
def update_angle(A, B, old):
    if A == 0.0 and B == 0.0:
        return old
    return QUARTER_PI + 0.5 * math.atan2(A, B)


@njit(cache=True, nogil=True)
def shift_neighbours(indptr, indices, weights, j, dc, field):
    for idx in range(indptr[j], indptr[j + 1]):
        field[indices[idx]] += weights[idx] * dc


@njit(cache=True, nogil=True)
def sweep(indptr, indices, weights, lam, theta, cos2, field, counter):
    """One Gauss-Seidel pass in ascending vertex order.

    Returns (max |dtheta|, sum |theta_new - pi/4|). ``counter[0]`` counts
    incremental field updates since the last full refresh.
    """
    n = theta.size
    B = 1.0 - lam
    max_delta = 0.0
    dist = 0.0
    for j in range(n):
        old = theta[j]
        new = update_angle(lam * field[j], B, old)
        d = abs(new - old)
        if d > 0.0:
            c = math.cos(2.0 * new)
            shift_neighbours(indptr, indices, weights, j, c - cos2[j], field)
            theta[j] = new
            cos2[j] = c
            counter[0] += 1
            if counter[0] >= REFRESH_EVERY:
                fields(indptr, indices, weights, cos2, field)
                counter[0] = 0
            if d > max_delta:
                max_delta = d
        dist += abs(new - QUARTER_PI)
    return max_delta, dist


@njit(cache=True, nogil=True)
def is_converged(max_delta, dist, eps, n):
    return max_delta == 0.0 or max_delta < (eps / n) * dist


@njit(cache=True, nogil=True)
def relax(indptr, indices, weights, lam, eps, max_sweeps, theta, cos2, field, counter):
    """Sweep until converged or ``max_sweeps``; returns sweeps used."""
    n = theta.size
    for s in range(1, max_sweeps + 1):
        max_delta, dist = sweep(indptr, indices, weights, lam, theta, cos2, field, counter)
        if is_converged(max_delta, dist, eps, n):
            return s
    return max_sweeps


@njit(cache=True, nogil=True)
def reflect(indptr, indices, weights, sites, theta, cos2, field):
    """theta_j -> pi/2 - theta_j on ``sites`` with incremental field update."""
    for j in sites:
        theta[j] = HALF_PI - theta[j]
        c = math.cos(2.0 * theta[j])
        shift_neighbours(indptr, indices, weights, j, c - cos2[j], field)
        cos2[j] = c


def _gradient(lam, theta, cos2, field, out):
    for j in prange(theta.size):
        out[j] = -2.0 * lam * field[j] * math.sin(2.0 * theta[j]) - 2.0 * (1.0 - lam) * cos2[j]


gradient = njit(cache=True, nogil=True)(_gradient)
gradient_par = njit(cache=True, nogil=True, parallel=True)(_gradient)


def _step(theta, grad, tau, cos2):
    for j in prange(theta.size):
        x = theta[j] - tau * grad[j]
        if x < 0.0:
            x = 0.0
        elif x > HALF_PI:
            x = HALF_PI
        theta[j] = x
        cos2[j] = math.cos(2.0 * x)


step = njit(cache=True, nogil=True)(_step)
step_par = njit(cache=True, nogil=True, parallel=True)(_step)


def _global_relax(indptr, indices, weights, lam, tau, eps, max_steps, theta, cos2, field, grad, old):
    n = theta.size
    for s in range(1, max_steps + 1):
        for j in prange(n):
            old[j] = theta[j]
            grad[j] = -2.0 * lam * field[j] * math.sin(2.0 * theta[j]) - 2.0 * (1.0 - lam) * cos2[j]
        for j in prange(n):
            x = theta[j] - tau * grad[j]
            if x < 0.0:
                x = 0.0
            elif x > HALF_PI:
                x = HALF_PI
            theta[j] = x
            cos2[j] = math.cos(2.0 * x)
        for j in prange(n):
            acc = 0.0
            for idx in range(indptr[j], indptr[j + 1]):
                acc += weights[idx] * cos2[indices[idx]]
            field[j] = acc
        max_delta = 0.0
        dist = 0.0
        for j in range(n):
            d = abs(theta[j] - old[j])
            if d > max_delta:
                max_delta = d
            dist += abs(theta[j] - QUARTER_PI)
        if max_delta == 0.0 or max_delta < (eps / n) * dist:
            return s
    return max_steps


global_relax = njit(cache=True, nogil=True)(_global_relax)
global_relax_par = njit(cache=True, nogil=True, parallel=True)(_global_relax)


@njit(cache=True, nogil=True)
def rounded_cut(u, v, w, theta):
    cut = 0.0
    for e in range(u.size):
        if (theta[u[e]] > QUARTER_PI) != (theta[v[e]] > QUARTER_PI):
            cut += w[e]
    return cut


@njit(cache=True, nogil=True)
def lqa_anneal(indptr, indices, weights, u, v, w, gamma, eta, steps, theta, cos2, field,
               cuts, best_theta):
    """Annealed gradient descent; records the rounded cut after every step
    and copies the angles of the best rounded state into ``best_theta``."""
    n = theta.size
    grad = np.empty(n)
    best = -np.inf
    for k in range(1, steps + 1):
        s = k / steps
        for j in range(n):
            grad[j] = (-2.0 * (1.0 - s) * cos2[j]
                       - 2.0 * s * gamma * field[j] * math.sin(2.0 * theta[j]))
        for j in range(n):
            x = theta[j] - eta * grad[j]
            if x < 0.0:
                x = 0.0
            elif x > HALF_PI:
                x = HALF_PI
            theta[j] = x
            cos2[j] = math.cos(2.0 * x)
        fields(indptr, indices, weights, cos2, field)
        c = rounded_cut(u, v, w, theta)
        cuts[k - 1] = c
        if c > best:
            best = c
            best_theta[:] = theta
