# QiILS on small random cubic graphs, checked against brute force.
import numpy as np

from qiils import SolverConfig, gen_regular, run
from qiils.oracle import brute_force_maxcut

cfg = SolverConfig(algo="qiils", lam=0.55, p=0.5, max_sweeps=80, iterations=50)
first_hit = []
for seed in range(20):
    g = gen_regular(16, 3, seed=seed)
    opt = brute_force_maxcut(g).value
    tr = run(g, cfg.replace(seed=seed))
    cuts = tr.best_cuts()
    hit = int(np.argmax(cuts == opt)) + 1 if cuts[-1] == opt else None
    first_hit.append(hit)
    print(f"instance {seed:2d}: optimum {opt:.0f}, found {tr.best_cut:.0f}, first at iteration {hit}")

solved = [h for h in first_hit if h is not None]
print(f"solved {len(solved)}/20, median iterations {np.median(solved):.0f}")

# One iteration in detail: relax, round, keep the best, reflect a fraction p
tr = run(gen_regular(16, 3, seed=0), cfg.replace(iterations=5))
for r in tr.records:
    print(f"iota {r.iota}: cut {r.cut:.0f} best {r.best_cut:.0f} sweeps {r.sweeps}")

# lam = 1 turns QiILS into plain iterated single-flip search (ILS)
a = run(gen_regular(30, 3, seed=3), SolverConfig(algo="ils", p=0.2, iterations=20))
b = run(gen_regular(30, 3, seed=3), SolverConfig(algo="qiils", lam=1.0, p=0.2, iterations=20))
print("ils == qiils at lam=1:", a.same_numbers(b))
