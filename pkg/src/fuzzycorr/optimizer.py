"""Deterministic multi-start maximization of a witness over measurement angles.

The objective is smooth and low-dimensional (2m angles, m <= 5 in
practice), so a seeded multi-start Nelder-Mead is both simple and reliable.
Angles live on [0, pi) with wraparound; one structured "chained" start is
always included so the known sharp-limit optima are never missed, the rest
come from a seeded random stream, which makes results reproducible
bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .witness import STEERING, AngleAssignment, evaluate

__all__ = ["OptimizerConfig", "OptResult", "maximize", "maximize_profile"]


@dataclass(frozen=True)
class OptimizerConfig:
    """Restart budget, iteration cap, value tolerance and RNG seed."""

    restarts: int = 24
    max_iterations: int = 2000
    tolerance: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1 or self.tolerance <= 0:
            raise ValueError("restarts, max_iterations and tolerance must be positive")


@dataclass(frozen=True)
class OptResult:
    """Best witness value found, its angles, and restart/iteration metadata."""

    value: float
    angles: AngleAssignment
    restart_index: int
    iterations: int
    converged: bool


def structured_start(spec):
    """Chained-measurement starting point.

    alice[i] = (i-1) pi / (2m), bob[j] = pi/2 - (j - 1/2) pi / (2m)
    (1-based).  For the steering witness the matched pattern
    bob[i] = pi/2 - alice[i] is used instead, which is exactly optimal in
    the sharp limit.
    """
    m = spec.m
    alice = np.arange(m) * math.pi / (2 * m)
    if spec.kind == STEERING:
        bob = math.pi / 2 - alice
    else:
        bob = math.pi / 2 - (np.arange(m) + 0.5) * math.pi / (2 * m)
    return np.concatenate([alice, bob])


def _neg_objective(spec, corr):
    m = spec.m

    def fun(x):
        angles = AngleAssignment(alice=x[:m], bob=x[m:])
        return -evaluate(spec, angles, corr)

    return fun


def maximize(spec, corr, config=OptimizerConfig(), extra_starts=()):
    """Best witness value over all restarts of Nelder-Mead descent.

    ``extra_starts`` lets callers inject warm starts (flat 2m vectors);
    they run after the structured start, before the seeded random ones, so
    determinism is preserved for identical inputs.
    """
    m = spec.m
    fun = _neg_objective(spec, corr)
    rng = np.random.default_rng(config.seed)
    starts = [structured_start(spec)]
    starts += [np.asarray(x, dtype=float) for x in extra_starts]
    while len(starts) < config.restarts + len(extra_starts):
        starts.append(rng.uniform(0.0, math.pi, size=2 * m))

    best = None
    total_iters = 0
    converged = False
    for idx, x0 in enumerate(starts):
        res = minimize(
            fun,
            x0,
            method="Nelder-Mead",
            options={
                "maxiter": config.max_iterations,
                "xatol": 1e-9,
                "fatol": config.tolerance,
            },
        )
        total_iters += res.nit
        if best is None or res.fun < best.fun - 0.0:
            best = res
            best_index = idx
        converged = converged or bool(res.success)

    # Polish from the incumbent: restarting Nelder-Mead from the best point
    # rebuilds the simplex and typically gains several digits.
    res = minimize(
        fun,
        best.x,
        method="Nelder-Mead",
        options={
            "maxiter": config.max_iterations,
            "xatol": 1e-10,
            "fatol": config.tolerance * 1e-2,
        },
    )
    total_iters += res.nit
    if res.fun < best.fun:
        best = res

    angles = AngleAssignment(alice=best.x[:m], bob=best.x[m:])
    return OptResult(
        value=-float(best.fun),
        angles=angles,
        restart_index=best_index,
        iterations=int(total_iters),
        converged=converged,
    )


def maximize_profile(spec, correlators, config=OptimizerConfig()):
    """Optimize along a sweep of correlators, warm-starting each point.

    The previous optimum is injected as an extra start at every grid point,
    which keeps the traced curve on the same solution branch.
    """
    results = []
    warm = []
    for corr in correlators:
        result = maximize(spec, corr, config, extra_starts=warm)
        warm = [np.concatenate([result.angles.alice, result.angles.bob])]
        results.append(result)
    return results
