"""Symmetric m-settings Bell witnesses and the linear steering witness.

The Bell family has coefficient +1 on settings pairs with i + j <= m + 1
(1-based) and -1 elsewhere, with local-realist bound floor((m^2 + 1)/2);
m = 2 is CHSH with bound 2.  The steering witness is
(1/sqrt(m)) |sum_i <A_i B_i>| with unsteerable bound 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "WitnessSpec",
    "AngleAssignment",
    "bell_spec",
    "steering_spec",
    "lhv_bound_bruteforce",
    "evaluate",
    "violation_margin",
]

BELL = "bell"
STEERING = "steering"


@dataclass(frozen=True)
class WitnessSpec:
    """A witness identity: kind, settings count, coefficients and classical bound.

    ``coefficients`` is the m x m sign matrix for the Bell family and None
    for the steering witness (whose evaluation form needs no matrix).
    """

    kind: str
    m: int
    coefficients: np.ndarray | None
    bound: float


@dataclass(frozen=True)
class AngleAssignment:
    """One measurement angle per setting per party, reduced to [0, pi)."""

    alice: np.ndarray
    bob: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alice", np.asarray(self.alice, dtype=float) % math.pi)
        object.__setattr__(self, "bob", np.asarray(self.bob, dtype=float) % math.pi)
        if len(self.alice) != len(self.bob):
            raise ValueError("alice and bob must have the same number of settings")


def bell_coefficients(m):
    """Sign matrix of the symmetric Bell family: +1 iff i + j <= m + 1 (1-based)."""
    i = np.arange(1, m + 1)[:, None]
    j = np.arange(1, m + 1)[None, :]
    return np.where(i + j <= m + 1, 1.0, -1.0)


def bell_spec(m):
    """The m-settings symmetric Bell witness with bound floor((m^2 + 1)/2)."""
    if m < 2:
        raise ValueError("Bell witness requires m >= 2")
    return WitnessSpec(
        kind=BELL,
        m=m,
        coefficients=bell_coefficients(m),
        bound=float((m * m + 1) // 2),
    )


def steering_spec(m):
    """The m-settings linear steering witness (1/sqrt(m)) |sum_i <A_i B_i>| <= 1."""
    if m < 2:
        raise ValueError("steering witness requires m >= 2")
    return WitnessSpec(kind=STEERING, m=m, coefficients=None, bound=1.0)


def lhv_bound_bruteforce(m):
    """Maximum of the Bell form over all 2^(2m) deterministic sign strategies.

    Independent check of the closed-form bound: for each of Alice's 2^m
    sign vectors the best response of Bob is the sign of each column sum,
    so the inner maximization reduces to a sum of absolute column sums.
    """
    c = bell_coefficients(m)
    best = -math.inf
    for signs in itertools.product((1.0, -1.0), repeat=m):
        a = np.array(signs)
        best = max(best, float(np.abs(a @ c).sum()))
    return best


def _pair_values(angles, corr):
    """Correlation matrix over the assignment, via corr.matrix when available."""
    if hasattr(corr, "matrix"):
        return np.asarray(corr.matrix(angles.alice, angles.bob))
    return np.array(
        [[corr(a, b) for b in angles.bob] for a in angles.alice]
    )


def evaluate(spec, angles, corr):
    """Witness value for the given angles under the given correlator.

    Bell: sum_ij c[i,j] corr(alice[i], bob[j]).
    Steering: (1/sqrt(m)) |sum_i corr(alice[i], bob[i])| (non-negative).
    """
    if len(angles.alice) != spec.m:
        raise ValueError(f"expected {spec.m} settings per party, got {len(angles.alice)}")
    if spec.kind == BELL:
        return float(np.sum(spec.coefficients * _pair_values(angles, corr)))
    if spec.kind == STEERING:
        if hasattr(corr, "diagonal"):
            diag = np.asarray(corr.diagonal(angles.alice, angles.bob))
        else:
            diag = np.array([corr(a, b) for a, b in zip(angles.alice, angles.bob)])
        return abs(float(diag.sum())) / math.sqrt(spec.m)
    raise ValueError(f"unknown witness kind: {spec.kind!r}")


def violation_margin(spec, angles, corr):
    """Signed distance to the classical bound; positive means nonclassical."""
    return evaluate(spec, angles, corr) - spec.bound
