"""Coarse-grained bipartite correlations and quantum-to-classical transition search.

Numerical toolkit for fuzzy (coarse-grained) correlation functions of
macroscopic entangled states, symmetric multi-settings Bell witnesses and
linear steering witnesses, angle optimization, and location of the
coarsening / visibility values where the optimized witness drops to its
classical bound.
"""

from .correlation import (
    CoarseningParams,
    Correlator,
    StateSpec,
    corr_full,
    corr_reference,
    corr_resolution,
    corr_werner_full,
    corr_werner_resolution,
)
from .kernel import (
    DiscreteKernel,
    ReferenceKernel,
    distinguishability,
    make_discrete_kernel,
    reference_nodes,
    zeta,
)
from .optimizer import OptimizerConfig, OptResult, maximize, maximize_profile
from .transition import (
    BoundaryCurve,
    NoTransitionAtHi,
    NoViolationAtLo,
    NoViolationAtPureState,
    TransitionError,
    TransitionPoint,
    find_critical_Delta,
    find_critical_delta,
    find_critical_visibility,
    trace_boundary,
)
from .witness import (
    AngleAssignment,
    WitnessSpec,
    bell_spec,
    evaluate,
    lhv_bound_bruteforce,
    steering_spec,
    violation_margin,
)

__version__ = "0.1.0"
