# The error shrinks by exactly |1 - 4 theta| per step.
#
# Sweep theta and print the measured ratio next to the predicted one.
# theta = 0.23 gives 0.08; theta = 0.1 and 0.4 both give 0.6.

from crossnnm import build_example2, build_grid, run
from crossnnm.nnm import RunHistory

grid = build_grid(40)
f, g = build_example2(grid)
f = f + 1.0  # give the data an even part too

print(f"{'theta':>6} {'measured':>14} {'|1-4theta|':>12} {'steps':>6}")
for theta in (0.05, 0.1, 0.2, 0.23, 0.25, 0.3, 0.4, 0.45):
    hist = run(grid, f, g, "new", theta, max_iter=60, tol=1e-12).history
    r = hist.asymptotic_ratio()
    print(f"{theta:6.2f} {r:14.10f} {RunHistory.expected_ratio(theta):12.10f} {hist.records[-1].k:6d}")

# past theta = 1/2 the factor exceeds one and the iteration blows up
hist = run(grid, f, g, "new", 0.6, max_iter=30).history
print("\ntheta = 0.6:", hist.status.value, "after", hist.records[-1].k, "steps")
