"""How often is the assembled matrix E an M-matrix for random constant coefficients with c < 0?

For constant coefficients an interior row of E sums to -b - c, so rows with
b > -c lose diagonal dominance on every mesh. The step matrix I + dt E keeps
it for small dt.

Run: python demos/mmatrix_audit.py [draws]
"""

import sys

import numpy as np
import scipy.sparse as sp

from fitted_hjb import benchmarks as bm
from fitted_hjb.assembly_1d import assemble_1d
from fitted_hjb.assembly_2d import assemble_2d
from fitted_hjb.sparse_linalg import check_m_matrix

draws = int(sys.argv[1]) if len(sys.argv) > 1 else 100
rng = np.random.default_rng(0)
for label, make, assemble in (("1D", bm.random_problem_1d, assemble_1d), ("2D", bm.random_problem_2d, assemble_2d)):
    e_ok = step_ok = predicted = 0
    for _ in range(draws):
        spec, g = make(rng)
        E = assemble(spec, g, np.zeros((g.n_interior, 1)), 0.0).E
        e_ok += check_m_matrix(E).verdict
        step_ok += check_m_matrix(sp.identity(E.shape[0]) + 0.01 * E).verdict
        b = float(spec.b(1.0, 0, None)) if label == "1D" else float(spec.b1(1.0, 1.0, 0, None) + spec.b2(1.0, 1.0, 0, None))
        c = float(spec.c(1.0, 0, None)) if label == "1D" else float(spec.c(1.0, 1.0, 0, None))
        predicted += b + c <= 0
    print(f"{label}: E M-matrix {e_ok}/{draws} (interior rows dominant by the row-sum rule {predicted}/{draws}); "
          f"I + 0.01 E M-matrix {step_ok}/{draws}")
