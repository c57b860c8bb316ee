# A global RBF interpolant next to the local PU-MLS operator.
#
# Global interpolation solves one dense N x N kernel system; PU-MLS solves
# many small least-squares problems instead.  On a few hundred Halton points
# both resolve Franke's function, and the kernel system's conditioning
# limits how flat the Gaussian can be made.

import numpy as np

from pumls import PuConfig, ScaledWeight, build_covering, fit_rbf, halton_points, pu_mls_eval, unit_box
from pumls.experiments import error_metrics, franke
from pumls.lsq import NotPositiveDefiniteError
from pumls.pointsets import eval_grid
from pumls.rbf import kernel_matrix

data = halton_points(289, 2).with_values(franke)
Z = eval_grid(60, 2)
exact = franke(*Z.T)

for token, shape in (("g", 6.0), ("g", 3.0), ("w2", 1.0), ("m4", 8.0)):
    weight = ScaledWeight(token, shape)
    try:
        interp = fit_rbf(weight, data)
    except NotPositiveDefiniteError:
        # positive definite in exact arithmetic, not in floating point
        print(f"RBF {token:3s} shape {shape:4.1f}: Cholesky breaks down")
        continue
    mae, rmse = error_metrics(exact, interp(Z))
    cond = np.linalg.cond(kernel_matrix(weight, data.nodes))
    print(f"RBF {token:3s} shape {shape:4.1f}: MAE {mae:.3e}  RMSE {rmse:.3e}  cond {cond:.1e}")

cov = build_covering(data, unit_box(2), degree=2)
mae, rmse = error_metrics(exact, pu_mls_eval(cov, PuConfig(), data, Z))
print(f"PU-MLS degree 2, W2 : MAE {mae:.3e}  RMSE {rmse:.3e}  ({cov.size} balls)")
