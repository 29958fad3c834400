# Second-order accuracy of the five-point scheme.
#
# u = sin(pi x) sin(pi y) solves -Lap u = 2 pi^2 u with zero boundary values.
# Halving h should cut the nodal error by about four.

import numpy as np

from crossnnm import build_grid, l2_norm, monolithic_solve
from crossnnm.problems import sine_manufactured

errs = []
for n in (5, 10, 20, 40, 80, 160):
    grid = build_grid(n)
    f, g, exact = sine_manufactured(grid)
    err = l2_norm(grid, monolithic_solve(grid, f, g) - exact)
    ratio = f"  ratio {errs[-1] / err:.3f}" if errs else ""
    print(f"n={n:4d}  error {err:.3e}{ratio}")
    errs.append(err)

# observed order from the last two meshes
print(f"order ~ {np.log2(errs[-2] / errs[-1]):.3f}")
