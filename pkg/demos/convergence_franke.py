# Convergence of PU-MLS and DDPU-MLS on Franke's function.
#
# Both operators are run on uniform grids of spacing 2^-l and compared on a
# 120 x 120 evaluation grid.  With quadratic local fits the observed order
# should sit a little above 3; the data-dependent blend should not change it.

import sys

from pumls.experiments import run_convergence

levels = [int(v) for v in sys.argv[1:]] or [3, 4, 5, 6]

for method in ("pu", "ddpu"):
    report = run_convergence(method, "grid", degree=2, kernel="w2", levels=levels)
    print(f"\n{method.upper()}-MLS, degree 2, Wendland C2 weights")
    print(report)

# Same experiment on Halton points.  There is no grid here, so h is taken as
# the nominal value of the grid with the same number of nodes.
report = run_convergence("pu", "halton", degree=2, kernel="w2", levels=levels)
print("\nPU-MLS on Halton points")
print(report)

# Cubic fits need the smoother C4 weight to show fourth order.
report = run_convergence("pu", "grid", degree=3, kernel="w4", levels=[2, 3, 4, 5])
print("\nPU-MLS, degree 3, Wendland C4 weights")
print(report)
