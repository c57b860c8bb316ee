"""Radial profiles phi(r) used as RBF kernels and as MLS / partition weights.

All profiles take the normalized radius r >= 0; shape scaling lives in
:class:`ScaledWeight`.

=====  ===========================  =================================  ==========
token  name                         phi(r)                             smoothness
=====  ===========================  =================================  ==========
g      Gaussian                     exp(-r^2)                          C^inf
imq    inverse multiquadric         (1 + r^2)^(-1/2)                   C^inf
m0     Matern C0                    exp(-r)                            C^0
m2     Matern C2                    exp(-r) (1 + r)                    C^2
m4     Matern C4                    exp(-r) (3 + 3r + r^2)             C^4
w0     Wendland C0                  (1 - r)_+^2                        C^0
w2     Wendland C2                  (1 - r)_+^4 (4r + 1)               C^2
w4     Wendland C4                  (1 - r)_+^6 (35r^2 + 18r + 3)      C^4
=====  ===========================  =================================  ==========
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "RadialKernel",
    "ScaledWeight",
    "DEFAULT_TRUNCATION",
    "evaluate",
    "effective_support_radius",
    "kernel_from_token",
]

DEFAULT_TRUNCATION = 1e-10


class RadialKernel(enum.Enum):
    GAUSSIAN = "g"
    INVERSE_MULTIQUADRIC = "imq"
    MATERN0 = "m0"
    MATERN2 = "m2"
    MATERN4 = "m4"
    WENDLAND0 = "w0"
    WENDLAND2 = "w2"
    WENDLAND4 = "w4"

    @property
    def token(self) -> str:
        return self.value

    @property
    def compactly_supported(self) -> bool:
        return self.value.startswith("w")

    @property
    def smoothness(self) -> float:
        if self in (RadialKernel.GAUSSIAN, RadialKernel.INVERSE_MULTIQUADRIC):
            return math.inf
        return int(self.value[1])

    @property
    def peak(self) -> float:
        return float(_PROFILES[self](np.zeros(1))[0])

    def __call__(self, r):
        return evaluate(self, r)


def kernel_from_token(token) -> RadialKernel:
    if isinstance(token, RadialKernel):
        return token
    try:
        return RadialKernel(str(token).lower())
    except ValueError:
        raise ValueError(
            f"unknown kernel {token!r}; expected one of "
            + ", ".join(k.value for k in RadialKernel)
        ) from None


def _wendland(power, poly):
    def phi(r):
        s = np.clip(1.0 - r, 0.0, None)
        return s**power * poly(r)

    return phi


_PROFILES = {
    RadialKernel.GAUSSIAN: lambda r: np.exp(-(r**2)),
    RadialKernel.INVERSE_MULTIQUADRIC: lambda r: 1.0 / np.sqrt(1.0 + r**2),
    RadialKernel.MATERN0: lambda r: np.exp(-r),
    RadialKernel.MATERN2: lambda r: np.exp(-r) * (1.0 + r),
    RadialKernel.MATERN4: lambda r: np.exp(-r) * (3.0 + 3.0 * r + r**2),
    RadialKernel.WENDLAND0: _wendland(2, lambda r: 1.0),
    RadialKernel.WENDLAND2: _wendland(4, lambda r: 4.0 * r + 1.0),
    RadialKernel.WENDLAND4: _wendland(6, lambda r: 35.0 * r**2 + 18.0 * r + 3.0),
}


def evaluate(kernel: RadialKernel, r):
    """phi(r) for scalar or array ``r``; raises on negative radii."""
    kernel = kernel_from_token(kernel)
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise ValueError("negative radius")
    out = _PROFILES[kernel](arr)
    if np.ndim(r) == 0:
        return float(out)
    return out


def effective_support_radius(kernel: RadialKernel, truncation: float = DEFAULT_TRUNCATION) -> float:
    """Normalized radius beyond which phi(r) <= truncation.

    Compact kernels return 1 regardless of the threshold.
    """
    kernel = kernel_from_token(kernel)
    if not truncation > 0:
        raise ValueError("truncation must be positive")
    if truncation >= kernel.peak:
        raise ValueError("truncation above peak")
    if kernel.compactly_supported:
        return 1.0
    if kernel is RadialKernel.GAUSSIAN:
        return math.sqrt(-math.log(truncation))
    if kernel is RadialKernel.INVERSE_MULTIQUADRIC:
        return math.sqrt(truncation**-2 - 1.0)
    if kernel is RadialKernel.MATERN0:
        return -math.log(truncation)
    phi = _PROFILES[kernel]
    hi = 1.0
    while phi(hi) > truncation:
        hi *= 2.0
    return brentq(lambda r: phi(r) - truncation, 0.0, hi, xtol=1e-14, rtol=1e-14)


@dataclass(frozen=True)
class ScaledWeight:
    """w(x; c) = phi(shape * ||x - c||)."""

    kernel: RadialKernel
    shape: float
    truncation: float = DEFAULT_TRUNCATION

    def __post_init__(self):
        object.__setattr__(self, "kernel", kernel_from_token(self.kernel))
        if not self.shape > 0:
            raise ValueError("shape parameter must be positive")

    @property
    def support_radius(self) -> float:
        """Physical radius outside which the weight is treated as zero."""
        return effective_support_radius(self.kernel, self.truncation) / self.shape

    def of_distance(self, dist):
        """Weights from distances; values at or below the cutoff are zeroed."""
        w = _PROFILES[self.kernel](self.shape * np.asarray(dist, dtype=float))
        return np.where(w > self.truncation, w, 0.0)

    def __call__(self, x, center):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        dist = np.linalg.norm(x - np.asarray(center, dtype=float), axis=-1)
        return self.of_distance(dist)
