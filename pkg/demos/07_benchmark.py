# Timing per sweep and the field-cache audit, as reported by `qiils bench`.
from qiils import gen_regular, toroidal_grid
from qiils.cli import time_sweeps

g = toroidal_grid(50, 16, seed=0)
for algo in ("qiils", "ils", "qiigs", "lqa"):
    rep = time_sweeps(g, algo, lam=0.3, sweeps=50, repeats=20)
    print(f"{algo:6s} median {rep.median_ms:.4f} ms/sweep  IQR {rep.iqr_ms:.4f}  audit ok {rep.audit_ok}")

# Time per sweep grows with the number of edges
for n in (1000, 10000, 50000):
    rep = time_sweeps(gen_regular(n, 3, seed=n), "qiigs", 0.35, sweeps=20, repeats=3)
    print(f"n={n:6d} |E|={rep.m:6d}: {rep.median_ms:.3f} ms per step")
