# How the smoothness indicators behave under refinement.
#
# I_k is the mean absolute residual of a plain linear fit on ball k.  On
# smooth data it falls like h^2 (a factor near 4 per level).  On balls that
# the jump cuts through it levels off at a value set by the jump height.

import numpy as np

from pumls import build_covering, compute_indicators, uniform_grid, unit_box
from pumls.experiments import TEST_FUNCTIONS

smooth = TEST_FUNCTIONS["franke"]
jump = TEST_FUNCTIONS["franke-jump"]

print(" l   balls   max I_k (smooth)   min I_k (cut balls)")
for level in range(3, 8):
    pts = uniform_grid(level)
    cov = build_covering(pts, unit_box(2))
    i_smooth = compute_indicators(cov, pts.with_values(smooth)).values

    data = pts.with_values(jump)
    i_jump = compute_indicators(cov, data).values
    cut = [k for k, m in enumerate(cov.members)
           if 0 < jump.inside(*data.nodes[m].T).sum() < len(m)]

    print(f"{level:2d} {cov.size:7d} {i_smooth.max():18.4e} {np.min(i_jump[cut]):20.4e}")
