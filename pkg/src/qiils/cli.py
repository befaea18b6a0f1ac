"""``qiils`` command line: solve, tune, gen and bench.

Exit codes: 0 ok, 1 usage, 2 I/O, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .energy import FieldCache, ps_energy
from .graph import Graph, GraphError, GsetParseError, gen_regular, read_gset, to_gset
from .presets import BestKnownRegistry, PresetError, get_preset
from .solver import ALGORITHMS, RunTrace, SolverConfig, random_angles, run, run_trials

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3
CSV_FIELDS = ("instance", "algo", "seed", "iota", "cut", "best_cut", "best_energy", "sweeps", "ms")


class UsageError(Exception):
    pass


class NumericError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ------------------------------------------------------------------ helpers

def load_graph(spec: str) -> Graph:
    """Read a Gset file. Bare names are also looked up in ``$GSET_DIR``."""
    path = Path(spec)
    if not path.exists() and os.environ.get("GSET_DIR"):
        alt = Path(os.environ["GSET_DIR"]) / spec
        if alt.exists():
            path = alt
    return read_gset(path)


def _open_out(path: Optional[str]):
    if path is None or path == "-":
        return _Borrowed(sys.stdout)
    return open(path, "w", newline="")


class _Borrowed:
    def __init__(self, fh):
        self.fh = fh

    def __enter__(self):
        return self.fh

    def __exit__(self, *exc):
        self.fh.flush()
        return False


def summarize(traces: Sequence[RunTrace], best_known: Optional[float]) -> dict:
    cuts = np.array([t.best_cut for t in traces])
    out = {"trials": len(traces), "best": float(cuts.max()), "avg": float(cuts.mean()),
           "best_known": best_known, "solved": None}
    if best_known is not None:
        out["solved"] = int(np.sum(np.abs(cuts - best_known) <= 1e-9 * max(1.0, abs(best_known))))
        if best_known > 0:
            out["best_ratio"] = out["best"] / best_known
            out["avg_ratio"] = out["avg"] / best_known
    return out


def trace_document(instance: str, cfg: SolverConfig, traces: Sequence[RunTrace],
                   best_known: Optional[float]) -> dict:
    return {
        "instance": instance,
        "algo": cfg.algo,
        "config": cfg.to_dict(),
        "trials": [t.to_dict() for t in traces],
        "summary": summarize(traces, best_known),
    }


def write_trace_csv(instance: str, traces: Sequence[RunTrace], fh) -> None:
    w = csv.writer(fh)
    w.writerow(CSV_FIELDS)
    for t in traces:
        for r in t.records:
            w.writerow([instance, t.algo, t.seed, r.iota, repr(r.cut), repr(r.best_cut),
                        repr(r.best_energy), r.sweeps, repr(r.ms)])


def _check_finite(traces: Sequence[RunTrace]) -> None:
    for t in traces:
        if not t.records or not all(math.isfinite(r.best_energy) for r in t.records):
            raise NumericError(f"non-finite energy in trial with seed {t.seed}")


# -------------------------------------------------------------------- solve

def _solver_config(args) -> SolverConfig:
    over = dict(algo=args.algo, lam=args.lam, p=args.p, epsilon=args.eps,
                max_sweeps=args.sweeps, iterations=args.iters, tau=args.tau, seed=args.seed,
                sweep_budget=args.sweep_budget)
    if args.preset:
        try:
            return get_preset(args.preset).config(**over)
        except PresetError as exc:
            raise UsageError(str(exc.args[0])) from None
    algo = over.pop("algo") or "qiils"
    try:
        return SolverConfig(algo=algo, **{k: v for k, v in over.items() if v is not None})
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def cmd_solve(args) -> int:
    g = load_graph(args.graph)
    cfg = _solver_config(args)
    if args.algo == "ils" and args.lam not in (None, 1.0):
        raise UsageError("ils runs at lambda = 1")
    instance = Path(g.name or args.graph).stem
    best_known = args.best_known
    if best_known is None:
        reg = BestKnownRegistry()
        best_known = reg.get(instance)
        if best_known is None and args.preset:
            best_known = reg.get(args.preset)
    seeds = range(cfg.seed, cfg.seed + args.trials)
    traces = run_trials(g, cfg, seeds, workers=args.threads)
    _check_finite(traces)
    with _open_out(args.out) as fh:
        if args.format == "csv":
            write_trace_csv(instance, traces, fh)
        else:
            json.dump(trace_document(instance, cfg, traces, best_known), fh, indent=1)
            fh.write("\n")
    s = summarize(traces, best_known)
    if args.out not in (None, "-"):
        msg = f"{instance}: best {s['best']:g}  avg {s['avg']:.2f}"
        if s["solved"] is not None:
            msg += f"  solved {s['solved']}/{s['trials']} (best known {best_known:g})"
        print(msg)
    return EXIT_OK


# --------------------------------------------------------------------- tune

def _tune_graphs(args) -> list[Graph]:
    if args.graph:
        return [load_graph(x) for x in args.graph]
    if not args.family:
        raise UsageError("tune needs --graph or --family")
    weighted = args.family == "w3r"
    try:
        return [gen_regular(args.n, 3, weighted=weighted, seed=args.seed + i)
                for i in range(args.count)]
    except GraphError as exc:
        raise UsageError(str(exc)) from None


def cmd_tune(args) -> int:
    from .tuning import explore_grid, lambda_scan, write_table_csv

    if not 0.0 <= args.lo <= args.hi <= 1.0:
        raise UsageError("need 0 <= lo <= hi <= 1")
    graphs = _tune_graphs(args)
    cfg = SolverConfig(algo=args.algo, p=args.p, max_sweeps=args.sweeps, iterations=args.iters,
                       epsilon=args.eps, tau=args.tau, seed=args.seed)
    rep = lambda_scan(graphs, cfg, trials=args.trials, lo=args.lo, hi=args.hi, tol=args.tol,
                      workers=args.threads)
    if not math.isfinite(rep.lam):
        raise NumericError("lambda search produced a non-finite value")
    print(f"lambda* = {rep.lam:.4f}" + ("  (fallback: lowest final energy)" if rep.fallback else ""))
    print("probes:")
    for pr in sorted(rep.probes, key=lambda p: p.lam):
        m = "nan" if pr.fit is None else f"{pr.fit.m:.5f}"
        print(f"  lambda={pr.lam:.4f}  m={m}  final_energy={pr.final_energy:.6f}")
    if args.grid > 0:
        values = np.linspace(args.lo, args.hi, args.grid) if args.grid > 1 else [rep.lam]
        rows = explore_grid(graphs, "lam", [float(v) for v in values], cfg, args.trials,
                            workers=args.threads)
        print("table:")
        buf = io.StringIO()
        write_table_csv(rows, buf)
        sys.stdout.write(buf.getvalue())
        if args.out:
            with open(args.out, "w", newline="") as fh:
                write_table_csv(rows, fh)
    return EXIT_OK


# ---------------------------------------------------------------------- gen

def cmd_gen(args) -> int:
    try:
        g = gen_regular(args.n, args.d, weighted=args.weighted, seed=args.seed)
    except GraphError as exc:
        raise UsageError(str(exc)) from None
    with _open_out(args.out) as fh:
        fh.write(to_gset(g))
    return EXIT_OK


# -------------------------------------------------------------------- bench

@dataclass
class BenchReport:
    algo: str
    n: int
    m: int
    per_sweep_ms: list[float]
    median_ms: float
    iqr_ms: float
    field_drift: float
    energy_drift: float

    @property
    def audit_ok(self) -> bool:
        return self.field_drift < 1e-9 and self.energy_drift < 1e-9

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["audit_ok"] = self.audit_ok
        return d


def cached_energy(cache: FieldCache, lam: float, theta: np.ndarray) -> float:
    """Energy from the cached fields: each edge appears twice in sum c_j a_j."""
    return 0.5 * lam * float(cache.c @ cache.a) - (1.0 - lam) * float(np.sum(np.sin(2 * theta)))


def time_sweeps(g: Graph, algo: str = "qiils", lam: float = 0.5, sweeps: int = 100,
                repeats: int = 5, seed: int = 0, tau: float = 0.1) -> BenchReport:
    """Wall time per sweep (per step for qiigs, lqa and gcs) over ``repeats``
    fresh random starts, plus a drift audit of the field cache.

    Each repeat runs ``sweeps`` sweeps without a convergence test and
    reports its mean; the median and interquartile range are over repeats.
    """
    if sweeps < 1 or repeats < 1:
        raise ValueError("sweeps and repeats must be >= 1")
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}")
    lam = 1.0 if algo == "ils" else lam
    per = []
    drift = edrift = 0.0
    if algo in ("lqa", "gcs"):
        for r in range(repeats):
            tr = run(g, SolverConfig(algo=algo, lam=lam, max_sweeps=sweeps, seed=seed + r))
            per.append(tr.records[0].ms)
    else:
        # compile outside the timed region
        warm = random_angles(g.n, np.random.default_rng(seed))
        _bench_pass(g, algo, lam, tau, 1, warm, FieldCache(g, warm))
        for r in range(repeats):
            theta = random_angles(g.n, np.random.default_rng(seed + r))
            cache = FieldCache(g, theta)
            t0 = time.perf_counter()
            done = _bench_pass(g, algo, lam, tau, sweeps, theta, cache)
            per.append((time.perf_counter() - t0) * 1e3 / done)
            drift = max(drift, cache.drift(theta))
            ref = ps_energy(g, lam, theta)
            edrift = max(edrift, abs(cached_energy(cache, lam, theta) - ref))
    q1, med, q3 = np.percentile(per, [25, 50, 75])
    return BenchReport(algo, g.n, g.m, per, float(med), float(q3 - q1), drift, edrift)


def _bench_pass(g, algo, lam, tau, sweeps, theta, cache) -> int:
    if algo == "qiigs":
        scratch = np.empty((2, g.n))
        return int(_kernels.global_relax_par(g.indptr, g.indices, g.weights, lam, tau, 0.0,
                                             sweeps, theta, cache.c, cache.a,
                                             scratch[0], scratch[1]))
    return int(_kernels.relax(g.indptr, g.indices, g.weights, lam, 0.0, sweeps, theta,
                              cache.c, cache.a, cache.counter))


def cmd_bench(args) -> int:
    g = load_graph(args.graph)
    try:
        rep = time_sweeps(g, args.algo, args.lam, args.sweeps, args.repeats, args.seed, args.tau)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        print(json.dumps(rep.to_dict()))
    else:
        name = g.name or Path(args.graph).stem
        print(f"{name} (n={g.n}, |E|={g.m}) {args.algo}: median {rep.median_ms:.4f} ms/sweep, "
              f"IQR {rep.iqr_ms:.4f} ms over {args.repeats} repeats")
        print(f"cache audit: field drift {rep.field_drift:.2e}, energy drift "
              f"{rep.energy_drift:.2e} -> {'ok' if rep.audit_ok else 'FAILED'}")
    if not rep.audit_ok:
        return EXIT_NUMERIC
    return EXIT_OK


# --------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qiils", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    threads = os.cpu_count() or 1

    s = sub.add_parser("solve", help="run seeded trials on one graph")
    s.add_argument("--graph", required=True, help="Gset file (bare names also searched in $GSET_DIR)")
    s.add_argument("--algo", choices=ALGORITHMS)
    s.add_argument("--lambda", dest="lam", type=float)
    s.add_argument("--p", type=float)
    s.add_argument("--eps", type=float)
    s.add_argument("--sweeps", type=int, help="max sweeps per relaxation (schedule length for lqa/gcs)")
    s.add_argument("--iters", type=int)
    s.add_argument("--tau", type=float)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--sweep-budget", type=int, help="stop each trial after this many sweeps")
    s.add_argument("--preset")
    s.add_argument("--best-known", type=float)
    s.add_argument("--out")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--threads", type=int, default=threads)
    s.set_defaults(func=cmd_solve)

    t = sub.add_parser("tune", help="choose lambda by golden-section search on the decay rate")
    t.add_argument("--graph", nargs="+")
    t.add_argument("--family", choices=("u3r", "w3r"))
    t.add_argument("--n", type=int, default=50)
    t.add_argument("--count", type=int, default=10)
    t.add_argument("--algo", choices=("qiils", "qiigs"), default="qiils")
    t.add_argument("--trials", type=int, default=5)
    t.add_argument("--lo", type=float, default=0.05)
    t.add_argument("--hi", type=float, default=0.95)
    t.add_argument("--tol", type=float, default=0.02)
    t.add_argument("--p", type=float, default=0.5)
    t.add_argument("--sweeps", type=int, default=80)
    t.add_argument("--iters", type=int, default=8)
    t.add_argument("--eps", type=float, default=1e-3)
    t.add_argument("--tau", type=float, default=0.1)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--grid", type=int, default=5, help="lambda values in the exploration table (0: none)")
    t.add_argument("--out", help="write the exploration table as CSV")
    t.add_argument("--threads", type=int, default=threads)
    t.set_defaults(func=cmd_tune)

    gn = sub.add_parser("gen", help="random d-regular graph in Gset format")
    gn.add_argument("--n", type=int, required=True)
    gn.add_argument("--d", type=int, default=3)
    gn.add_argument("--weighted", action="store_true")
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--out")
    gn.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="median wall time per sweep")
    b.add_argument("--graph", required=True)
    b.add_argument("--algo", choices=ALGORITHMS, default="qiils")
    b.add_argument("--sweeps", type=int, default=100)
    b.add_argument("--repeats", type=int, default=5)
    b.add_argument("--lambda", dest="lam", type=float, default=0.5)
    b.add_argument("--tau", type=float, default=0.1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if args.command is None:
            raise UsageError("missing command")
        if getattr(args, "trials", 1) < 1 or getattr(args, "threads", 1) < 1:
            raise UsageError("trials and threads must be >= 1")
        return args.func(args)
    except UsageError as exc:
        print(f"qiils: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PresetError as exc:
        print(f"qiils: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, GsetParseError) as exc:
        print(f"qiils: cannot read or write: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NumericError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"qiils: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"qiils: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
