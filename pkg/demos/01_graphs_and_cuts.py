# Graphs, the Gset text format and cut values.
import numpy as np

from qiils import Graph, cut_value, gen_regular, ising_energy, parse_gset, to_gset, toroidal_grid

# A Gset file is an "n m" header followed by m lines "u v w" (1-indexed).
text = """4 5
1 2 1
2 3 1
3 4 1
4 1 1
1 3 -1
"""
g = parse_gset(text, name="square")
print(g, "total weight", g.total_weight)
print("neighbours of vertex 0:", g.adjacency(0))

# Bits split the vertices in two; the cut is the weight crossing the split.
b = np.array([0, 1, 0, 1])
print("cut", cut_value(g, b), " Ising energy", ising_energy(g, b))
# Ising energy and cut are tied together: E = W - 2 C
print("W - 2C =", g.total_weight - 2 * cut_value(g, b))

# Random 3-regular graphs, unweighted and weighted
u3r = gen_regular(16, 3, seed=0)
w3r = gen_regular(16, 3, weighted=True, seed=0)
print(u3r, "degrees", set(u3r.degrees.tolist()))
print("first weighted edges", w3r.edges[:3])

# Serialising and parsing again gives back the same graph
assert parse_gset(to_gset(w3r)) == w3r

# Toroidal +-1 grids have the same shape as the toroidal Gset instances
t = toroidal_grid(50, 16, seed=0)
print(t, "weights", np.unique(t.w))
