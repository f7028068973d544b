"""One sample path of the cash-management value rate H(R, sigma, t) on a 10 x 10 mesh.

Run: python demos/cash_sample_path.py [seed]
"""

import sys

import numpy as np

from fitted_hjb import benchmarks as bm

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
params = bm.CashMgmtParams(seed=seed)
sol = bm.solve_cash(params, n_steps=100)
g = sol.surface.grid
H = sol.surface.values[-1].reshape(g.shape)

np.set_printoptions(precision=4, suppress=True, linewidth=120)
print(f"seed {seed}: demand mean {sol.demand.mean():+.4f}, var {sol.demand.var():.4f}")
print(f"inner iterations max {max(sol.iterations)}; all step matrices M-matrix: {all(r.verdict for r in sol.m_matrix)}")
print("H at t = 0 (rows R from 0 to R_max, columns sigma from 0 to sigma_max):")
print(H)
u = sol.surface.controls[-1][:, 0].reshape(g.n1 - 1, g.n2 - 1)
print("control u on interior nodes at t = 0:")
print(u)
