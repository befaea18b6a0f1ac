# Annealing-schedule baselines: LQA on angles, GCS on a statevector.
import numpy as np

from qiils import SolverConfig, gen_regular, run, toroidal_grid
from qiils.baselines import GcsParams, LqaConfig, gcs_energy, gcs_state, run_gcs, run_lqa
from qiils.oracle import brute_force_maxcut

g = toroidal_grid(50, 16, seed=0)
lqa = run_lqa(g, LqaConfig(gamma=0.5, eta=0.5, steps=2000, seed=0))
qi = run(g, SolverConfig(lam=0.3, p=0.2, iterations=10 ** 6, sweep_budget=2000, seed=0))
print(f"2000 sweeps: LQA best cut {lqa.best_cut:.0f}, QiILS best cut {qi.best_cut:.0f}")

# GCS starts from |+>^n; all-zero parameters give energy -n at s = 0
n = 6
print("zero-parameter energy at s=0:", gcs_energy(gen_regular(n, 3, seed=0), 0.0,
                                                  gcs_state(GcsParams.zeros(n))))

small = gen_regular(8, 3, seed=2)
tr = run_gcs(small, steps=40, step_size=0.1, seed=0)
print(f"GCS on n=8: best cut {tr.best_cut:.0f}, optimum {brute_force_maxcut(small).value:.0f}")
