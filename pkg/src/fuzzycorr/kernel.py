"""Gaussian coarse-graining kernels.

Two kinds of fuzziness enter the measurement model:

* resolution coarsening -- the dichotomization boundary of the outcome
  labels is smeared by a discrete Gaussian of standard deviation ``delta``
  (in outcome-label units);
* reference coarsening -- the measurement angle jitters around its nominal
  value with a Gaussian of standard deviation ``Delta`` (radians).

This module builds both kernels, the sign step ``zeta`` that dichotomizes
outcome labels, and the success probability for telling the two macroscopic
branch states apart under a fuzzy readout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DiscreteKernel",
    "ReferenceKernel",
    "zeta",
    "make_discrete_kernel",
    "zeta_mean",
    "distinguishability",
    "reference_nodes",
]


def zeta(x):
    """Dichotomizing sign step: +1 for x > 0, -1 for x <= 0.

    The boundary label x = 0 belongs to the minus branch.
    """
    return 1 if x > 0 else -1


@dataclass(frozen=True)
class DiscreteKernel:
    """Normalized discrete Gaussian over integer offsets k = -K..K.

    ``weights[k + support_halfwidth]`` is the probability attached to
    offset k.  Construction via :func:`make_discrete_kernel` guarantees
    non-negativity, exact symmetry and unit sum.
    """

    delta: float
    support_halfwidth: int
    weights: np.ndarray

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be non-negative")
        if self.support_halfwidth < 1:
            raise ValueError("support_halfwidth must be a positive integer")
        if len(self.weights) != 2 * self.support_halfwidth + 1:
            raise ValueError("weights length must be 2*support_halfwidth + 1")

    @property
    def offsets(self):
        """Integer offsets -K..K matching ``weights``."""
        k = self.support_halfwidth
        return np.arange(-k, k + 1)

    def weight(self, k):
        """Weight at integer offset k (zero outside the truncated support)."""
        half = self.support_halfwidth
        if -half <= k <= half:
            return float(self.weights[k + half])
        return 0.0


def make_discrete_kernel(delta, sigmas=8.0):
    """Build the resolution-coarsening kernel for standard deviation ``delta``.

    The support is truncated at K = ceil(sigmas * max(delta, 1)) and the
    truncated weights are renormalized to sum exactly to one, so every
    delta >= 0 yields a proper probability distribution.  delta = 0 is the
    point mass at offset zero (sharp readout).

    Parameters
    ----------
    delta : float
        Standard deviation of the coarsening, in outcome-label units.
    sigmas : float
        Truncation half-width in units of delta; must be >= 1.
    """
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if sigmas < 1:
        raise ValueError("sigmas must be >= 1")
    half = int(math.ceil(sigmas * max(delta, 1.0)))
    k = np.arange(-half, half + 1)
    if delta == 0:
        weights = np.zeros(2 * half + 1)
        weights[half] = 1.0
    else:
        # Symmetrize explicitly: exp() of a symmetric argument is already
        # symmetric, but averaging with the mirror guards against any
        # platform-dependent rounding of k**2 / delta**2.
        raw = np.exp(-(k.astype(float) ** 2) / (2.0 * delta**2))
        raw = 0.5 * (raw + raw[::-1])
        weights = raw / raw.sum()
    return DiscreteKernel(delta=float(delta), support_halfwidth=half, weights=weights)


def zeta_mean(kernel, n):
    """Kernel average of the sign step, sum_k weights[k] * zeta(n - k).

    This single number carries the whole effect of resolution coarsening on
    a dichotomic readout centered at label n; the correlation functions are
    trigonometric combinations of it.
    """
    signs = np.where(n - kernel.offsets > 0, 1.0, -1.0)
    return float(np.dot(kernel.weights, signs))


def distinguishability(n, kernel):
    """Success probability of discriminating the two branch states |l_{+n}>, |l_{-n}>.

    Returns |sum_k weights[k] * zeta(n - k)|**2, a value in [0, 1].
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    return zeta_mean(kernel, n) ** 2


@dataclass(frozen=True)
class ReferenceKernel:
    """Gaussian jitter of the measurement angle: std. dev. Delta (radians).

    ``quadrature_order`` controls the Gauss-Hermite rule used to average
    smooth integrands against the jitter distribution.
    """

    Delta: float
    quadrature_order: int = 32

    def __post_init__(self):
        if self.Delta < 0:
            raise ValueError("Delta must be non-negative")
        if self.quadrature_order < 2:
            raise ValueError("quadrature_order must be >= 2")


def reference_nodes(kernel, center):
    """Quadrature nodes and weights for the angle-jitter average.

    Returns a list of (angle, weight) pairs such that
    sum_i w_i * f(phi_i) approximates the Gaussian average of f around
    ``center`` with standard deviation ``kernel.Delta``.  The weights sum
    to one.  Delta = 0 collapses to the single node (center, 1).

    Gauss-Hermite with the change of variable phi = center + sqrt(2)*Delta*t;
    exact to machine precision for the low-frequency trigonometric
    polynomials that appear in the correlators.
    """
    if kernel.Delta == 0:
        return [(float(center), 1.0)]
    t, w = np.polynomial.hermite.hermgauss(kernel.quadrature_order)
    phis = center + math.sqrt(2.0) * kernel.Delta * t
    weights = w / math.sqrt(math.pi)
    return list(zip(phis.tolist(), weights.tolist()))
