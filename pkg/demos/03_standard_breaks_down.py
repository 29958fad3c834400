# The standard scheme on odd data.
#
# Example 2 is odd, and on odd data the plain Neumann-Neumann iteration has
# no convergence guarantee at the cross-point.  The error grows, and the
# correction near the cross-point gets larger as the mesh is refined.

from crossnnm import build_example2, build_grid, run

grid = build_grid(20)
f, g = build_example2(grid)
hist = run(grid, f, g, "standard", 0.25, max_iter=12, tol=1e-300).history
print("n = 20, theta = 1/4")
for r in hist.records:
    print(f"  k={r.k:2d}  l2 {r.l2_error:10.3e}  |psi| near cross-point {r.psi_crosspoint_max:.4f}")

print("\n|psi| near the cross-point after two steps:")
for n in (10, 20, 40, 80):
    grid = build_grid(n)
    f, g = build_example2(grid)
    h = run(grid, f, g, "standard", 0.25, max_iter=2, tol=1e-300).history
    print(f"  n={n:3d}  {h.records[2].psi_crosspoint_max:.4f}")

# the same data through the new method converges
grid = build_grid(20)
f, g = build_example2(grid)
print("\nnew method:", run(grid, f, g, "new", 0.25).history.status.value)
