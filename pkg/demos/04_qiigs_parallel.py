# QiIGS: all angles move at once by a clipped gradient step.
import time

import numpy as np

from qiils import SolverConfig, gen_regular, run, toroidal_grid
from qiils.energy import FieldCache
from qiils.solver import gradient, global_step, random_angles

g = toroidal_grid(50, 16, seed=0)
cfg = SolverConfig(lam=0.3, p=0.2, max_sweeps=200, iterations=100, tau=0.1, seed=1)
for algo in ("qiils", "qiigs"):
    t0 = time.perf_counter()
    tr = run(g, cfg.replace(algo=algo))
    print(f"{algo}: best cut {tr.best_cut:.0f} after {tr.total_sweeps} sweeps, "
          f"{time.perf_counter() - t0:.2f} s")

# The update is a Jacobi step, so the threaded and serial kernels agree bit for bit
h = gen_regular(20000, 3, weighted=True, seed=0)
theta = random_angles(h.n, np.random.default_rng(0))
cache = FieldCache(h, theta)
grad = gradient(h, 0.35, theta, cache)
t1, t2 = theta.copy(), theta.copy()
global_step(t1, grad, 0.1)
global_step(t2, gradient(h, 0.35, theta, cache, parallel=True), 0.1, parallel=True)
print("serial vs parallel identical:", np.array_equal(t1, t2))
