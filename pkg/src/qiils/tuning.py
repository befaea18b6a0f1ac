"""Choosing lambda by the decay rate of the averaged best-energy curve, and
one-parameter exploration tables."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .graph import Graph
from .solver import SolverConfig, run_trials

__all__ = [
    "DecayFit", "DegenerateCurveError", "fit_decay", "GssResult", "golden_section", "gss",
    "gss_iterations", "Probe", "TuneReport", "lambda_scan", "tune_lambda", "energy_curve",
    "explore_grid", "write_table_csv", "TABLE_HEADER",
]

INV_PHI = (math.sqrt(5) - 1) / 2
TABLE_HEADER = ("param_value", "iteration", "mean_relative_error", "stderr")


class DegenerateCurveError(ValueError):
    pass


@dataclass
class DecayFit:
    """``E(iota) = c0 * exp(-m * iota) + c1`` with RMS residual."""
    c0: float
    c1: float
    m: float
    residual: float
    converged: bool = True

    def __call__(self, iota):
        return self.c0 * np.exp(-self.m * np.asarray(iota, dtype=float)) + self.c1


def _initial_guess(x, y):
    # asymptote from the tail median: the last point alone is too noisy
    c1 = float(np.median(y[-max(2, y.size // 4):]))
    c0 = y[0] - c1
    ratio = (y[:-1] - c1) / c0 if c0 != 0 else np.zeros(y.size - 1)
    # only the leading run above 10% of the amplitude; the tail is noise
    ok = ratio > 0.1
    if not ok.all():
        ok[int(np.argmin(ok)):] = False
    m = 1.0 / max(x[-1] - x[0], 1.0)
    if np.count_nonzero(ok) >= 2:
        slope = np.polyfit(x[:-1][ok], np.log(ratio[ok]), 1)[0]
        if np.isfinite(slope) and slope < 0:
            m = -slope
    return c0, c1, m


def fit_decay(curve, max_iter: int = 200) -> DecayFit:
    """Least-squares fit of an exponential approach to an asymptote.

    ``curve`` is a sequence of ``(iota, E)`` pairs. Damped Gauss-Newton from
    a log-linear start; gives up with ``m = 0`` and infinite residual if it
    fails to converge in ``max_iter`` steps.
    """
    pts = np.asarray(curve, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("curve must be a sequence of (iota, E) pairs")
    if pts.shape[0] < 4:
        raise ValueError("need at least 4 points to fit a decay")
    x, y = pts[:, 0], pts[:, 1]
    scale = float(np.max(np.abs(y - y.mean())))
    if scale == 0.0 or np.ptp(y) <= 1e-14 * max(1.0, float(np.max(np.abs(y)))):
        raise DegenerateCurveError("curve is constant")
    # fit in normalised units: shifted abscissa, centred and scaled ordinate
    x0 = x[0]
    xs = x - x0
    off = float(y.mean())
    ys = (y - off) / scale
    c0, c1, m = _initial_guess(xs, ys)

    def residuals(c0, c1, m):
        return c0 * np.exp(-m * xs) + c1 - ys

    r = residuals(c0, c1, m)
    cost = float(r @ r)
    mu = 1e-3
    done = False
    for _ in range(max_iter):
        e = np.exp(-m * xs)
        J = np.column_stack([e, np.ones_like(xs), -c0 * xs * e])
        JtJ = J.T @ J
        g = J.T @ r
        improved = False
        while mu < 1e12:
            try:
                step = np.linalg.solve(JtJ + mu * np.diag(np.diag(JtJ) + 1e-300), -g)
            except np.linalg.LinAlgError:
                mu *= 10
                continue
            cand = (c0 + step[0], c1 + step[1], m + step[2])
            r_new = residuals(*cand)
            cost_new = float(r_new @ r_new)
            if np.isfinite(cost_new) and cost_new <= cost:
                rel = abs(cost - cost_new) / max(cost, 1e-300)
                small = np.all(np.abs(step) <= 1e-12 * (np.abs(cand) + 1e-12))
                c0, c1, m = cand
                r, cost = r_new, cost_new
                mu = max(mu / 10, 1e-12)
                improved = True
                done = rel < 1e-13 or small or cost < 1e-28
                break
            mu *= 10
        if not improved or done:
            done = True
            break
    if not done or not np.isfinite(m):
        return DecayFit(0.0, float(y[-1]), 0.0, math.inf, converged=False)
    # back to original units; the shift x0 folds into the amplitude
    c0_orig = c0 * scale * math.exp(m * x0) if m * x0 < 700 else math.inf
    c1_orig = c1 * scale + off
    rms = math.sqrt(cost / xs.size) * scale
    return DecayFit(float(c0_orig), float(c1_orig), float(m), rms)


# ------------------------------------------------------------- golden section

@dataclass
class GssResult:
    x: float
    fx: float
    iterations: int
    evaluations: int
    bracket: tuple[float, float]
    history: list[tuple[float, float]] = field(default_factory=list)


def gss_iterations(lo: float, hi: float, tol: float) -> int:
    """Number of bracket reductions to get the width down to ``tol``."""
    if hi - lo <= tol:
        return 0
    return int(math.ceil(math.log((hi - lo) / tol) / math.log(1 / INV_PHI)))


def golden_section(f: Callable[[float], float], lo: float, hi: float,
                   tol: float = 1e-5) -> GssResult:
    """Maximise a unimodal ``f`` on ``[lo, hi]``.

    Each reduction shrinks the bracket by the golden ratio and costs one new
    evaluation. For multimodal ``f`` the result is a local maximum.
    """
    if not lo <= hi:
        raise ValueError("need lo <= hi")
    if tol <= 0:
        raise ValueError("tol must be positive")
    hist = []

    def ev(x):
        y = float(f(x))
        hist.append((x, y))
        return y

    if hi - lo <= tol:
        x = 0.5 * (lo + hi)
        return GssResult(x, ev(x), 0, 1, (lo, hi), hist)
    n_iter = gss_iterations(lo, hi, tol)
    a, b = lo, hi
    h = b - a
    c, d = b - INV_PHI * h, a + INV_PHI * h
    fc, fd = ev(c), ev(d)
    for k in range(n_iter):
        h *= INV_PHI
        if fc >= fd:  # max lies in [a, d]
            b, d, fd = d, c, fc
            if k < n_iter - 1:
                c = b - INV_PHI * h
                fc = ev(c)
        else:
            a, c, fc = c, d, fd
            if k < n_iter - 1:
                d = a + INV_PHI * h
                fd = ev(d)
    # the last reduction keeps one interior probe; it is the best seen in [a, b]
    inside = [(x, y) for x, y in hist if a <= x <= b]
    x, y = max(inside, key=lambda t: t[1])
    return GssResult(x, y, n_iter, len(hist), (a, b), hist)


def gss(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-5) -> float:
    return golden_section(f, lo, hi, tol).x


# ------------------------------------------------------------------ lambda

def _as_list(graphs) -> list[Graph]:
    return [graphs] if isinstance(graphs, Graph) else list(graphs)


def energy_curve(graphs, cfg: SolverConfig, trials: int, workers: int = 1) -> np.ndarray:
    """Pointwise mean best-so-far energy over graphs and seeds
    ``cfg.seed .. cfg.seed + trials - 1``."""
    seeds = range(cfg.seed, cfg.seed + trials)
    acc = np.zeros(cfg.iterations)
    count = 0
    for g in _as_list(graphs):
        for tr in run_trials(g, cfg, seeds, workers):
            acc += tr.best_energies()
            count += 1
    return acc / count


@dataclass
class Probe:
    lam: float
    fit: DecayFit | None
    final_energy: float
    curve: np.ndarray


@dataclass
class TuneReport:
    lam: float
    probes: list[Probe]
    fallback: bool


def lambda_scan(graphs, base_cfg: SolverConfig, trials: int = 10, lo: float = 0.05,
                hi: float = 0.95, tol: float = 0.02, workers: int = 1) -> TuneReport:
    """Golden-section search over lambda maximising the fitted decay rate.

    If any probed curve cannot be fitted, the probe with the lowest mean
    final energy wins instead.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if base_cfg.algo not in ("qiils", "qiigs"):
        base_cfg = base_cfg.replace(algo="qiils")
    probes: list[Probe] = []

    def objective(lam):
        curve = energy_curve(graphs, base_cfg.replace(lam=float(lam)), trials, workers)
        pts = np.column_stack([np.arange(1, curve.size + 1), curve])
        try:
            fit = fit_decay(pts)
        except (DegenerateCurveError, ValueError):
            fit = None
        probes.append(Probe(float(lam), fit, float(curve[-1]), curve))
        return fit.m if fit is not None and fit.converged else -math.inf

    res = golden_section(objective, lo, hi, tol)
    fallback = any(p.fit is None for p in probes)
    lam = res.x
    if fallback:
        lam = min(probes, key=lambda p: (p.final_energy, p.lam)).lam
    return TuneReport(float(lam), probes, fallback)


def tune_lambda(graphs, base_cfg: SolverConfig, trials: int = 10, lo: float = 0.05,
                hi: float = 0.95, tol: float = 0.02, workers: int = 1) -> float:
    return lambda_scan(graphs, base_cfg, trials, lo, hi, tol, workers).lam


# ------------------------------------------------------------- exploration

def explore_grid(graphs, param_name: str, values: Sequence, base_cfg: SolverConfig,
                 trials: int, best_known=None, workers: int = 1) -> list[tuple]:
    """Mean relative error per iteration for each value of one parameter.

    ``param_name`` is any SolverConfig field. Iterated searches use the best
    cut so far; lqa and gcs use the rounded cut of the current step, so a
    diverging schedule shows up as a rising curve. Without ``best_known``
    each graph is scored against the best cut found anywhere in the grid.
    Rows are ``(param_value, iteration, mean_relative_error, stderr)``.
    """
    values = list(values)
    if not values:
        raise ValueError("values must be non-empty")
    if not hasattr(base_cfg, param_name) or param_name in ("algo", "seed"):
        raise ValueError(f"cannot explore parameter {param_name!r}")
    gs = _as_list(graphs)
    if best_known is None or np.isscalar(best_known):
        refs = [best_known] * len(gs)
    else:
        refs = list(best_known)
    seeds = range(base_cfg.seed, base_cfg.seed + trials)
    cuts = {}  # (value index, graph index) -> (trials, iterations)
    for vi, val in enumerate(values):
        cfg = base_cfg.replace(**{param_name: type(getattr(base_cfg, param_name))(val)})
        for gi, g in enumerate(gs):
            traces = run_trials(g, cfg, seeds, workers)
            attr = "cut" if cfg.algo in ("lqa", "gcs") else "best_cut"
            cuts[vi, gi] = np.array([[getattr(r, attr) for r in t.records] for t in traces])
    for gi in range(len(gs)):
        if refs[gi] is None:
            refs[gi] = max(float(cuts[vi, gi].max()) for vi in range(len(values)))
    rows = []
    for vi, val in enumerate(values):
        errs = np.concatenate([1.0 - cuts[vi, gi] / refs[gi] for gi in range(len(gs))])
        k = errs.shape[0]
        mean = errs.mean(axis=0)
        se = errs.std(axis=0, ddof=1) / math.sqrt(k) if k > 1 else np.zeros_like(mean)
        rows.extend((val, i + 1, float(mean[i]), float(se[i])) for i in range(mean.size))
    return rows


def write_table_csv(rows: Iterable[tuple], fh) -> None:
    w = csv.writer(fh)
    w.writerow(TABLE_HEADER)
    for r in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in r])
