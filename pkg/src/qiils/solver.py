"""Quantum-inspired iterated local search on product states.

``qiils`` relaxes the angles with closed-form single-site updates swept in
vertex order, ``qiigs`` with synchronous gradient steps on all angles, and
``ils`` is ``qiils`` pinned to ``lam = 1`` (plain greedy single-flip descent).
Every iteration relaxes, rounds to a bitstring, keeps the best cut seen and
then reflects a random fraction ``p`` of the angles.
"""
from __future__ import annotations

import dataclasses
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .energy import FieldCache
from .graph import Graph

__all__ = [
    "ALGORITHMS", "SolverConfig", "IterationRecord", "RunTrace",
    "update_angle", "sweep", "relax", "converged", "round_to_bits", "perturb",
    "gradient", "global_step", "global_relax", "random_angles", "run", "run_trials",
]

ALGORITHMS = ("qiils", "qiigs", "ils", "lqa", "gcs")
QUARTER_PI = math.pi / 4
HALF_PI = math.pi / 2


@dataclass
class SolverConfig:
    algo: str = "qiils"
    lam: float = 0.5
    p: float = 0.3
    epsilon: float = 1e-3
    max_sweeps: int = 200
    iterations: int = 100
    tau: float = 0.1
    seed: int = 0
    # baseline-only knobs, ignored by the iterated searches
    gamma: float = 0.5
    eta: float = 0.5
    step_size: float = 0.1
    # stop once this many sweeps have been spent in total (None: no cap)
    sweep_budget: Optional[int] = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algo!r}; choose from {ALGORITHMS}")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if self.max_sweeps < 1 or self.iterations < 1:
            raise ValueError("max_sweeps and iterations must be >= 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if self.sweep_budget is not None and self.sweep_budget < 1:
            raise ValueError("sweep_budget must be >= 1")
        if self.algo == "qiigs" and not self.tau > 0:
            raise ValueError("qiigs needs tau > 0")

    def replace(self, **changes) -> "SolverConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class IterationRecord:
    iota: int
    cut: float
    best_cut: float
    best_energy: float
    sweeps: int
    ms: float


@dataclass
class RunTrace:
    algo: str
    seed: int
    total_weight: float
    records: list[IterationRecord] = field(default_factory=list)
    best_bits: Optional[np.ndarray] = None

    @property
    def best_cut(self) -> float:
        return self.records[-1].best_cut if self.records else float("nan")

    @property
    def best_energy(self) -> float:
        return self.records[-1].best_energy if self.records else float("nan")

    @property
    def total_sweeps(self) -> int:
        return sum(r.sweeps for r in self.records)

    def best_cuts(self) -> np.ndarray:
        return np.array([r.best_cut for r in self.records])

    def best_energies(self) -> np.ndarray:
        return np.array([r.best_energy for r in self.records])

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "iterations": [dataclasses.asdict(r) for r in self.records],
            "final_bits": "".join(map(str, self.best_bits.tolist())) if self.best_bits is not None else "",
        }

    def same_numbers(self, other: "RunTrace") -> bool:
        """Equality of everything except wall times."""
        strip = lambda t: [(r.iota, r.cut, r.best_cut, r.best_energy, r.sweeps) for r in t.records]
        return (strip(self) == strip(other)
                and np.array_equal(self.best_bits, other.best_bits))


# --------------------------------------------------------------- single pieces

def update_angle(A: float, B: float, current: float = QUARTER_PI) -> float:
    """Minimiser of ``A cos 2t - B sin 2t``; keeps ``current`` when flat."""
    if A == 0.0 and B == 0.0:
        return current
    return QUARTER_PI + 0.5 * math.atan2(A, B)


def sweep(g: Graph, lam: float, theta: np.ndarray, cache: FieldCache,
          on_update: Optional[Callable[[int, float, float], None]] = None) -> tuple[float, float]:
    """One in-place Gauss-Seidel pass; returns (max_delta, basis_distance).

    With ``on_update`` the pass runs in Python and calls
    ``on_update(j, old, new)`` after every single-site update; results are
    identical to the compiled pass.
    """
    if on_update is None:
        return _kernels.sweep(g.indptr, g.indices, g.weights, float(lam), theta,
                              cache.c, cache.a, cache.counter)
    B = 1.0 - lam
    max_delta = 0.0
    dist = 0.0
    for j in range(g.n):
        old = float(theta[j])
        new = update_angle(lam * cache.a[j], B, old)
        if new != old:
            cache.update(j, old, new)
            theta[j] = new
            max_delta = max(max_delta, abs(new - old))
        dist += abs(new - QUARTER_PI)
        on_update(j, old, new)
    return max_delta, dist


def converged(max_delta: float, basis_distance: float, epsilon: float, n: int) -> bool:
    return max_delta == 0.0 or max_delta < (epsilon / n) * basis_distance


def relax(g: Graph, lam: float, theta: np.ndarray, cache: FieldCache,
          epsilon: float = 1e-3, max_sweeps: int = 200) -> int:
    """Sweep until :func:`converged` or ``max_sweeps``; returns sweeps used."""
    return int(_kernels.relax(g.indptr, g.indices, g.weights, float(lam), float(epsilon),
                              int(max_sweeps), theta, cache.c, cache.a, cache.counter))


def round_to_bits(theta) -> np.ndarray:
    return (np.asarray(theta) > QUARTER_PI).astype(np.int8)


def perturb(theta: np.ndarray, p: float, rng: np.random.Generator,
            cache: Optional[FieldCache] = None) -> np.ndarray:
    """Reflect ``round(p n)`` distinct random angles about pi/4, in place.

    Returns the reflected vertex ids. Pass ``cache`` to keep it consistent.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    n = theta.size
    k = int(math.floor(p * n + 0.5))
    if k == 0:
        return np.empty(0, dtype=np.int64)
    sites = rng.choice(n, size=k, replace=False).astype(np.int64)
    if cache is None:
        theta[sites] = HALF_PI - theta[sites]
    else:
        g = cache.g
        _kernels.reflect(g.indptr, g.indices, g.weights, sites, theta, cache.c, cache.a)
    return sites


def gradient(g: Graph, lam: float, theta: np.ndarray, cache: FieldCache,
             parallel: bool = False) -> np.ndarray:
    out = np.empty(g.n)
    kern = _kernels.gradient_par if parallel else _kernels.gradient
    kern(float(lam), theta, cache.c, cache.a, out)
    return out


def global_step(theta: np.ndarray, grad: np.ndarray, tau: float,
                cache: Optional[FieldCache] = None, parallel: bool = False) -> None:
    """Jacobi update ``theta <- clip(theta - tau * grad, 0, pi/2)`` in place."""
    grad = np.asarray(grad, dtype=float)
    if grad.shape != theta.shape:
        raise ValueError("gradient and angle vector differ in length")
    cos2 = cache.c if cache is not None else np.empty_like(theta)
    (_kernels.step_par if parallel else _kernels.step)(theta, grad, float(tau), cos2)
    if cache is not None:
        g = cache.g
        (_kernels.fields_par if parallel else _kernels.fields)(
            g.indptr, g.indices, g.weights, cache.c, cache.a)
        cache.counter[0] = 0


def global_relax(g: Graph, lam: float, theta: np.ndarray, cache: FieldCache, tau: float,
                 epsilon: float = 1e-3, max_steps: int = 200, parallel: bool = True) -> int:
    kern = _kernels.global_relax_par if parallel else _kernels.global_relax
    scratch = np.empty((2, g.n))
    steps = kern(g.indptr, g.indices, g.weights, float(lam), float(tau), float(epsilon),
                 int(max_steps), theta, cache.c, cache.a, scratch[0], scratch[1])
    cache.counter[0] = 0
    return int(steps)


def random_angles(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(0.0, HALF_PI, size=n)


# ------------------------------------------------------------------------ run

def run(g: Graph, cfg: SolverConfig, parallel: bool = True,
        observer: Optional[Callable[[int, np.ndarray], None]] = None) -> RunTrace:
    """Iterated search for ``cfg.algo`` in {qiils, qiigs, ils}.

    Runs ``cfg.iterations`` iterations, or fewer if ``cfg.sweep_budget``
    sweeps are spent first (the last relaxation is cut to fit the budget).

    ``observer(iota, theta)`` sees the relaxed angles of every iteration
    before rounding and perturbation. ``parallel`` only affects qiigs and
    never changes the numbers.
    """
    cfg.validate()
    if cfg.algo in ("lqa", "gcs"):
        from . import baselines
        return baselines.run_config(g, cfg)
    lam = 1.0 if cfg.algo == "ils" else cfg.lam
    rng = np.random.default_rng(cfg.seed)
    theta = random_angles(g.n, rng)
    cache = FieldCache(g, theta)
    trace = RunTrace(algo=cfg.algo, seed=cfg.seed, total_weight=g.total_weight)
    best_cut = -math.inf
    spent = 0
    budget = cfg.sweep_budget
    for iota in range(1, cfg.iterations + 1):
        if budget is not None and spent >= budget:
            break
        cap = cfg.max_sweeps if budget is None else min(cfg.max_sweeps, budget - spent)
        t0 = time.perf_counter()
        if cfg.algo == "qiigs":
            used = global_relax(g, lam, theta, cache, cfg.tau, cfg.epsilon, cap, parallel)
        else:
            used = relax(g, lam, theta, cache, cfg.epsilon, cap)
        spent += used
        if observer is not None:
            observer(iota, theta)
        cut = float(_kernels.rounded_cut(g.u, g.v, g.w, theta))
        if cut > best_cut:
            best_cut = cut
            trace.best_bits = round_to_bits(theta)
        perturb(theta, cfg.p, rng, cache)
        ms = (time.perf_counter() - t0) * 1e3
        trace.records.append(IterationRecord(iota, cut, best_cut, g.total_weight - 2 * best_cut,
                                             used, ms))
    return trace


def run_trials(g: Graph, cfg: SolverConfig, seeds, workers: int = 1) -> list[RunTrace]:
    """Independent runs of ``cfg`` for each seed, returned in seed order.

    Trials run on a thread pool when ``workers > 1``; compiled kernels
    release the GIL. Results do not depend on ``workers``.
    """
    cfgs = [cfg.replace(seed=int(s)) for s in seeds]
    if workers <= 1 or len(cfgs) <= 1:
        return [run(g, c) for c in cfgs]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: run(g, c), cfgs))
