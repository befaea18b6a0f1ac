# The product-state energy and its closed-form single-site minimiser.
import math

import numpy as np

from qiils import gen_regular, ps_energy
from qiils.energy import FieldCache, local_field
from qiils.oracle import exact_expectation, exact_ground_energy, product_state
from qiils.solver import update_angle

g = gen_regular(8, 3, weighted=True, seed=1)
rng = np.random.default_rng(0)
theta = rng.uniform(0, math.pi / 2, g.n)
lam = 0.5

# Each qubit is cos(t)|0> + sin(t)|1>; the energy only needs cos 2t and sin 2t.
print("product-state energy   ", ps_energy(g, lam, theta))
print("statevector expectation", exact_expectation(g, lam, product_state(theta)))

# A product state never goes below the true ground energy
print("exact ground energy    ", exact_ground_energy(g, lam))

# As a function of one angle the energy is A cos 2t - B sin 2t + const,
# with A = lam * (local field) and B = 1 - lam. Its minimiser is closed form.
j = 3
A, B = lam * local_field(g, theta, j), 1 - lam
t_star = update_angle(A, B)
grid = np.linspace(0, math.pi / 2, 100001)
print(f"site {j}: closed form {t_star:.6f}, grid search "
      f"{grid[np.argmin(A * np.cos(2 * grid) - B * np.sin(2 * grid))]:.6f}")

# FieldCache keeps every local field current while single angles change
cache = FieldCache(g, theta)
old = theta[j]
theta[j] = t_star
cache.update(j, old, t_star)
print("cache drift after update", cache.drift(theta))

# lam = 1 pushes angles to 0 or pi/2 (classical bits), lam = 0 to pi/4
print("lam=1:", update_angle(1.0 * 2.0, 0.0), " lam=0:", update_angle(0.0, 1.0))
