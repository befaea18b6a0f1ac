"""Quantum-inspired iterated local search for MaxCut on product states."""
import os

# omp is thread safe for parallel kernels launched from worker threads
os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

from .graph import (Graph, GraphError, GsetParseError, approximation_ratio, cut_value,  # noqa: E402
                    gen_regular, ising_energy, parse_gset, random_graph, read_gset, to_gset,
                    toroidal_grid, write_gset)
from .energy import FieldCache, local_field, ps_energy  # noqa: E402
from .solver import RunTrace, SolverConfig, run, run_trials  # noqa: E402

__version__ = "0.1.0"

__all__ = [
    "Graph", "GraphError", "GsetParseError", "approximation_ratio", "cut_value",
    "gen_regular", "ising_energy", "parse_gset", "random_graph", "read_gset", "to_gset",
    "toroidal_grid", "write_gset", "FieldCache", "local_field", "ps_energy",
    "RunTrace", "SolverConfig", "run", "run_trials",
]
