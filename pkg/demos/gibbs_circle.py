# Ringing at a circular jump, linear blend versus data-dependent blend.
#
# franke-jump is Franke's function plus one inside the disc of radius 1/4
# about the centre of the square.  Balls cut by the circle carry an O(1)
# smoothness indicator and the data-dependent weights push them out of the
# blend, so the ringing of the linear operator should mostly disappear.

import sys
from pathlib import Path

from pumls.experiments import run_discontinuity_study

out = Path(sys.argv[1]) if len(sys.argv) > 1 else None
level = 5

for function in ("franke-jump", "trig-circle", "exp-circle", "mixed-jump"):
    print(f"\n{function}, level {level}")
    print(f"{'':6s}{'overshoot':>12s}{'undershoot':>12s}{'far MAE':>12s}{'smooth MAE':>12s}")
    for method in ("pu", "ddpu"):
        rep = run_discontinuity_study(method, function, degree=2, kernel="w2", level=level)
        print(f"{method:6s}{rep.overshoot:12.3e}{rep.undershoot:12.3e}"
              f"{rep.far_field_mae:12.3e}{rep.smooth_mae:12.3e}")
        if out is not None:
            out.mkdir(parents=True, exist_ok=True)
            rep.to_csv(out / f"{function}_{method}_l{level}.csv")

# Negative overshoot or undershoot means the approximation stays inside the
# data range on that side.  The far-field MAE ignores a band of width 3h
# around the circle and should be close to the error on smooth data.
