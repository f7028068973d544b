"""Error table for the 2D Merton problem on the 50 x 45 mesh.

Run: python demos/merton2d_table.py [m ...]
"""

import sys

from fitted_hjb import benchmarks as bm

m_list = tuple(int(a) for a in sys.argv[1:]) or (200, 150, 100, 50)
params = bm.Merton2DParams()
print(f"growth rate (grid search over [0,1]^2) {params.growth_rate:.14f}")

table, runs = bm.error_table(params, m_list=m_list)
for method in table.methods:
    print(f"{method:>8} " + " ".join(f"{table[method, m]:11.3e}" for m in table.m_list))
