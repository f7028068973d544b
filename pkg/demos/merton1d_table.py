"""Error table for the 1D Merton problem, fitted volumes against finite differences.

Run: python demos/merton1d_table.py [n_cells]
"""

import sys

from fitted_hjb import benchmarks as bm

n_cells = int(sys.argv[1]) if len(sys.argv) > 1 else 1500
params = bm.Merton1DParams()
print(f"optimal control {params.optimal_control:.5f}, growth rate {params.growth_rate:.6f}")

table, runs = bm.error_table(params, grid=bm.default_grid(params, n_cells))
print(f"{'method':>8} " + " ".join(f"{'m=' + str(m):>11}" for m in table.m_list))
for method in table.methods:
    print(f"{method:>8} " + " ".join(f"{table[method, m]:11.3e}" for m in table.m_list))
for run in runs:
    print(f"{run.method:>8} m={run.n_steps:<4} inner iterations max {max(run.iterations)}, "
          f"step matrices M-matrix: {run.m_matrix_ok}")
