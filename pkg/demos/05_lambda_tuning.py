# Choosing lambda: golden-section search on the decay rate of the mean
# best-energy curve E(iota) = c0 exp(-m iota) + c1.
import numpy as np

from qiils import SolverConfig, gen_regular
from qiils.tuning import energy_curve, explore_grid, fit_decay, lambda_scan

# The fit recovers a known rate from a noisy synthetic curve
x = np.arange(1, 51)
y = 20 * np.exp(-0.1 * x) - 70 + 0.2 * np.random.default_rng(0).standard_normal(50)
print("fitted m on synthetic data:", round(fit_decay(np.column_stack([x, y])).m, 4))

graphs = [gen_regular(50, 3, seed=100 + i) for i in range(10)]
cfg = SolverConfig(p=0.5, max_sweeps=80, iterations=8)
curve = energy_curve(graphs, cfg.replace(lam=0.5), trials=3)
print("mean best energy per iteration at lam=0.5:", np.round(curve, 2))

rep = lambda_scan(graphs, cfg, trials=3, lo=0.05, hi=0.95, tol=0.05)
for p in sorted(rep.probes, key=lambda p: p.lam):
    print(f"  lam {p.lam:.3f}: m = {p.fit.m:.3f}")
print("selected lambda:", round(rep.lam, 3))

# Exploration table: mean relative error per iteration for a few lambdas
rows = explore_grid(graphs, "lam", [0.3, 0.5, 0.7], cfg, trials=3)
for value, it, err, se in rows:
    if it in (1, 8):
        print(f"lam {value}: iteration {it}, relative error {err:.4f} +- {se:.4f}")
