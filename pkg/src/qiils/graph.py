"""Weighted undirected graphs, Gset I/O, generators and cut bookkeeping.

Vertices are 0-indexed internally. The Gset text format is 1-indexed and the
conversion happens only in :func:`parse_gset` and :func:`to_gset`.
"""
from __future__ import annotations

import math
import os
from typing import Iterable, TextIO

import numpy as np

__all__ = [
    "Graph",
    "GraphError",
    "GsetParseError",
    "parse_gset",
    "read_gset",
    "to_gset",
    "write_gset",
    "gen_regular",
    "toroidal_grid",
    "random_graph",
    "as_bits",
    "cut_value",
    "ising_energy",
    "approximation_ratio",
]


class GraphError(ValueError):
    pass


class GsetParseError(GraphError):
    """Malformed Gset input.

    ``kind`` is one of ``header``, ``malformed``, ``vertex``, ``self_loop``,
    ``duplicate``, ``weight``, ``count``; ``line`` is 1-based.
    """

    def __init__(self, kind: str, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.kind = kind
        self.line = line


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class Graph:
    """Immutable weighted undirected graph.

    Edges are stored as parallel arrays ``u``, ``v``, ``w`` with ``u < v``.
    The adjacency index is CSR-like: the neighbours of ``j`` are
    ``indices[indptr[j]:indptr[j+1]]`` with weights in the same slice of
    ``weights``.
    """

    __slots__ = ("n", "u", "v", "w", "indptr", "indices", "weights",
                 "total_weight", "name")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, float]] | np.ndarray,
                 name: str | None = None):
        n = int(n)
        if n < 1:
            raise GraphError("graph needs at least one vertex")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=float)
        if arr.size == 0:
            arr = np.zeros((0, 3))
        if arr.ndim != 2 or arr.shape[1] != 3:
            raise GraphError("edges must be (u, v, w) triples")
        u = arr[:, 0].astype(np.int64)
        v = arr[:, 1].astype(np.int64)
        w = arr[:, 2].astype(np.float64)
        if np.any(u != arr[:, 0]) or np.any(v != arr[:, 1]):
            raise GraphError("vertex ids must be integers")
        if np.any((u < 0) | (u >= n) | (v < 0) | (v >= n)):
            raise GraphError("vertex id out of range")
        if np.any(u == v):
            raise GraphError("self-loop")
        if not np.all(np.isfinite(w)) or np.any(w == 0):
            raise GraphError("weights must be finite and nonzero")
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        keys = lo * n + hi
        if np.unique(keys).size != keys.size:
            raise GraphError("duplicate edge")

        self.n = n
        self.u = _frozen(lo)
        self.v = _frozen(hi)
        self.w = _frozen(w)
        self.name = name
        self.total_weight = float(math.fsum(w))

        # CSR adjacency, neighbours listed in edge order
        ends = np.concatenate([lo, hi])
        other = np.concatenate([hi, lo])
        ww = np.concatenate([w, w])
        order = np.argsort(ends, kind="stable")
        counts = np.bincount(ends, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        self.indptr = _frozen(indptr)
        self.indices = _frozen(other[order].astype(np.int64))
        self.weights = _frozen(ww[order])

    @property
    def m(self) -> int:
        return int(self.u.size)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [(int(a), int(b), float(c)) for a, b, c in zip(self.u, self.v, self.w)]

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        s, e = self.indptr[j], self.indptr[j + 1]
        return self.indices[s:e], self.weights[s:e]

    def adjacency(self, j: int) -> list[tuple[int, float]]:
        idx, ws = self.neighbors(j)
        return [(int(k), float(x)) for k, x in zip(idx, ws)]

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.u, other.u)
                and np.array_equal(self.v, other.v) and np.array_equal(self.w, other.w))

    __hash__ = None

    def __repr__(self):
        tag = f"{self.name!r}, " if self.name else ""
        return f"Graph({tag}n={self.n}, m={self.m})"


# --------------------------------------------------------------------- Gset I/O

def parse_gset(text: str | TextIO, name: str | None = None) -> Graph:
    """Parse a Gset edge list: ``n m`` header, then ``m`` lines ``u v w``."""
    if not isinstance(text, str):
        text = text.read()
    lines = text.splitlines()
    header = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(lines, start=1):
        parts = raw.split()
        if not parts:
            continue
        if header is None:
            if len(parts) != 2:
                raise GsetParseError("header", lineno, "expected 'n m' header")
            try:
                n, m = int(parts[0]), int(parts[1])
            except ValueError:
                raise GsetParseError("header", lineno, "header values must be integers") from None
            if n < 1 or m < 0:
                raise GsetParseError("header", lineno, "header values out of range")
            header = (n, m, lineno)
            continue
        n, m, _ = header
        if len(parts) != 3:
            raise GsetParseError("malformed", lineno, f"expected 'u v w', got {raw.strip()!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
            w = float(parts[2])
        except ValueError:
            raise GsetParseError("malformed", lineno, f"cannot parse {raw.strip()!r}") from None
        if not (1 <= a <= n and 1 <= b <= n):
            raise GsetParseError("vertex", lineno, f"vertex id out of range 1..{n}")
        if a == b:
            raise GsetParseError("self_loop", lineno, f"self-loop on vertex {a}")
        if not math.isfinite(w) or w == 0:
            raise GsetParseError("weight", lineno, "weight must be finite and nonzero")
        a, b = a - 1, b - 1
        if a > b:
            a, b = b, a
        if (a, b) in seen:
            raise GsetParseError("duplicate", lineno, f"duplicate edge ({a + 1}, {b + 1})")
        seen.add((a, b))
        edges.append((a, b, w))
    if header is None:
        raise GsetParseError("header", max(len(lines), 1), "missing 'n m' header")
    n, m, hline = header
    if len(edges) != m:
        raise GsetParseError("count", hline, f"header announces {m} edges, found {len(edges)}")
    return Graph(n, edges, name=name)


def read_gset(path: str | os.PathLike) -> Graph:
    with open(path) as fh:
        return parse_gset(fh, name=os.path.basename(os.fspath(path)))


def _fmt_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def to_gset(g: Graph) -> str:
    out = [f"{g.n} {g.m}"]
    out.extend(f"{a + 1} {b + 1} {_fmt_weight(c)}" for a, b, c in zip(g.u, g.v, g.w))
    return "\n".join(out) + "\n"


def write_gset(g: Graph, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(to_gset(g))


# ------------------------------------------------------------------ generators

def gen_regular(n: int, d: int, weighted: bool = False, seed: int | None = None,
                max_attempts: int | None = None) -> Graph:
    """Random simple ``d``-regular graph from the pairing model.

    Stubs are matched uniformly at random; any matching with a self-loop or a
    repeated pair is discarded and the whole pairing redrawn, up to
    ``10 * n`` attempts. Weights are 1, or i.i.d. uniform on (0, 1] when
    ``weighted``.
    """
    if d < 0 or d >= n:
        raise GraphError(f"need 0 <= d < n, got n={n}, d={d}")
    if (n * d) % 2:
        raise GraphError(f"n*d must be even, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    attempts = 10 * n if max_attempts is None else max_attempts
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    for _ in range(attempts):
        perm = rng.permutation(stubs).reshape(-1, 2)
        a, b = perm[:, 0], perm[:, 1]
        if np.any(a == b):
            continue
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        keys = lo * n + hi
        if np.unique(keys).size != keys.size:
            continue
        order = np.argsort(keys)
        lo, hi = lo[order], hi[order]
        w = 1.0 - rng.random(lo.size) if weighted else np.ones(lo.size)
        tag = f"{'w' if weighted else 'u'}{d}R"
        return Graph(n, np.column_stack([lo, hi, w]), name=tag)
    raise GraphError(f"no simple {d}-regular graph on {n} vertices after {attempts} attempts")


def toroidal_grid(rows: int, cols: int, seed: int | None = None,
                  signed: bool = True) -> Graph:
    """2D toroidal grid with +-1 weights (unit weights if not ``signed``).

    Same family and size as the toroidal Gset instances: 50 x 16 gives
    n = 800, m = 1600 like G12; 200 x 100 gives n = 20000 like G81.
    """
    if rows < 3 or cols < 3:
        raise GraphError("toroidal grid needs rows, cols >= 3")
    rng = np.random.default_rng(seed)
    idx = np.arange(rows * cols).reshape(rows, cols)
    right = np.column_stack([idx.ravel(), np.roll(idx, -1, axis=1).ravel()])
    down = np.column_stack([idx.ravel(), np.roll(idx, -1, axis=0).ravel()])
    pairs = np.concatenate([right, down])
    lo, hi = pairs.min(axis=1), pairs.max(axis=1)
    w = rng.choice([-1.0, 1.0], size=lo.size) if signed else np.ones(lo.size)
    return Graph(rows * cols, np.column_stack([lo, hi, w]), name=f"torus{rows}x{cols}")


def random_graph(n: int, m: int, seed: int | None = None, signed: bool = False) -> Graph:
    """Uniform random simple graph with exactly ``m`` edges."""
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise GraphError(f"cannot place {m} edges on {n} vertices")
    rng = np.random.default_rng(seed)
    keys = np.sort(rng.choice(total, size=m, replace=False))
    # invert the row-major upper-triangle index
    r = (2 * n - 1 - np.sqrt((2 * n - 1) ** 2 - 8 * keys)) // 2
    r = r.astype(np.int64)
    start = r * (2 * n - r - 1) // 2
    over = keys < start
    r[over] -= 1
    start = r * (2 * n - r - 1) // 2
    c = keys - start + r + 1
    w = rng.choice([-1.0, 1.0], size=m) if signed else np.ones(m)
    return Graph(n, np.column_stack([r, c, w]), name=f"rnd{n}_{m}")


# ----------------------------------------------------------------- evaluation

def as_bits(g: Graph, b) -> np.ndarray:
    bits = np.asarray(b)
    if bits.ndim != 1 or bits.size != g.n:
        raise GraphError(f"bitstring length {bits.size} does not match n={g.n}")
    return bits.astype(np.int8)


def cut_value(g: Graph, b) -> float:
    """Total weight of edges whose endpoints carry different bits."""
    bits = as_bits(g, b)
    crossing = bits[g.u] != bits[g.v]
    return float(math.fsum(g.w[crossing]))


def ising_energy(g: Graph, b) -> float:
    """Classical energy sum w z_u z_v with spins z = 1 - 2b."""
    z = 1 - 2 * as_bits(g, b).astype(np.int64)
    return float(math.fsum(g.w * (z[g.u] * z[g.v])))


def approximation_ratio(cut: float, best_known: float) -> float:
    if not best_known > 0:
        raise GraphError("best-known cut must be positive")
    return cut / best_known
