"""Command-line front end: sweeps, boundary traces and transition tables.

Subcommands
-----------
correlate   correlator spot checks for supplied angle pairs, all regimes
profile     optimized witness value along a variance grid (plot-ready)
boundary    transition curve delta_c^2(Delta^2) for one witness/state
table1      transition variances for m = 2 at several visibilities,
            compared against the published reference values

Configuration is a JSON file of key/value pairs; command-line flags
override individual keys.  Every output file starts with the fully
resolved configuration so a run can be reproduced bit-exactly.

Exit status: 0 success, 2 configuration error, 3 numeric failure
(no transition inside the bracket).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

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
from .optimizer import OptimizerConfig, maximize_profile
from .transition import (
    TransitionError,
    find_critical_Delta,
    find_critical_delta,
    trace_boundary,
)
from .witness import bell_spec, steering_spec

__all__ = ["ExperimentConfig", "ResultRow", "main"]

# Published transition variances (delta^2 at Delta=0, Delta^2 at delta=0)
# for the m=2 witnesses at n=5: p -> (bell_d2, bell_D2, steering_d2, steering_D2).
TABLE1_REFERENCE = {
    0.85: (8.29, 0.046, 8.94, 0.046),
    0.80: (6.72, 0.0308, 7.615, 0.0308),
    0.75: (4.81042, 0.0147, 6.137, 0.0147),
}

RESULT_FIELDS = [
    "m",
    "n",
    "p",
    "delta_sq",
    "Delta_sq",
    "witness_kind",
    "witness_value",
    "bound",
    "violated",
    "angles",
    "seed",
]


class ConfigError(ValueError):
    """Invalid experiment configuration; maps to exit status 2."""


@dataclass
class ExperimentConfig:
    """Resolved experiment parameters; serialized verbatim into every output."""

    witness: str = "bell"
    m: int = 2
    n: int = 5
    p: float = 1.0
    delta_sq: float = 0.0
    Delta_sq: float = 0.0
    delta_sq_grid: list = field(default_factory=list)
    Delta_sq_grid: list = field(default_factory=list)
    angle_pairs: list = field(default_factory=lambda: [[0.0, 0.0]])
    p_list: list = field(default_factory=lambda: [0.85, 0.80, 0.75])
    restarts: int = 24
    seed: int = 0
    tolerance: float = 1e-8
    max_iterations: int = 2000
    transition_tol: float = 1e-3
    sigmas: float = 8.0
    quadrature_order: int = 32
    threads: int = 0
    format: str = "csv"
    out: str = ""

    def validate(self):
        if self.witness not in ("bell", "steering"):
            raise ConfigError(f"witness: unknown kind {self.witness!r}")
        if self.m < 2:
            raise ConfigError("m: must be >= 2")
        if self.n < 1:
            raise ConfigError("n: must be >= 1")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError("p: must lie in [0, 1]")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format: unknown format {self.format!r}")
        for name in ("delta_sq_grid", "Delta_sq_grid"):
            grid = getattr(self, name)
            arr = np.asarray(grid, dtype=float)
            if arr.size and not np.all(np.isfinite(arr)):
                raise ConfigError(f"{name}: values must be finite")
            if arr.size and arr.min() < 0:
                raise ConfigError(f"{name}: values must be non-negative")
            if arr.size > 1 and np.any(np.diff(arr) < 0):
                raise ConfigError(f"{name}: values must be sorted ascending")
        return self

    def witness_spec(self):
        return bell_spec(self.m) if self.witness == "bell" else steering_spec(self.m)

    def optimizer_config(self):
        return OptimizerConfig(
            restarts=self.restarts,
            max_iterations=self.max_iterations,
            tolerance=self.tolerance,
            seed=self.seed,
        )

    def worker_count(self):
        return self.threads if self.threads > 0 else (os.cpu_count() or 1)


@dataclass
class ResultRow:
    """One output record; field order fixes the CSV column order."""

    m: int
    n: int
    p: float
    delta_sq: float
    Delta_sq: float
    witness_kind: str
    witness_value: float
    bound: float
    violated: bool
    angles: list
    seed: int


def parse_grid(text):
    """Parse a grid flag: 'a:b:step' (inclusive endpoints) or 'x,y,z'."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid: expected a:b:step, got {text!r}")
        a, b, step = (float(v) for v in parts)
        if step <= 0:
            raise ConfigError("grid: step must be positive")
        count = int(math.floor((b - a) / step + 1e-9)) + 1
        return [a + i * step for i in range(max(count, 1))]
    return [float(v) for v in text.split(",") if v.strip()]


def load_config(args):
    """Merge defaults, the optional JSON config file, and flag overrides."""
    values = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config: cannot read {args.config}: {exc}") from exc
        known = {f.name for f in dataclasses.fields(ExperimentConfig)}
        for key, value in data.items():
            if key not in known:
                raise ConfigError(f"config: unknown key {key!r}")
            values[key] = value
    for key in (
        "witness", "m", "n", "p", "seed", "threads", "format", "out",
        "restarts", "transition_tol",
    ):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if getattr(args, "delta_sq_grid", None) is not None:
        values["delta_sq_grid"] = parse_grid(args.delta_sq_grid)
    if getattr(args, "Delta_sq_grid", None) is not None:
        values["Delta_sq_grid"] = parse_grid(args.Delta_sq_grid)
    try:
        config = ExperimentConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return config.validate()


def format_number(value):
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_rows(config, rows, stream):
    """Emit rows in the configured format, preceded by the resolved config."""
    resolved = dataclasses.asdict(config)
    if config.format == "json":
        payload = {
            "config": resolved,
            "rows": [dataclasses.asdict(row) for row in rows],
        }
        json.dump(payload, stream, indent=2)
        stream.write("\n")
        return
    stream.write("# config " + json.dumps(resolved, sort_keys=True) + "\n")
    stream.write(",".join(RESULT_FIELDS) + "\n")
    for row in rows:
        record = dataclasses.asdict(row)
        cells = []
        for name in RESULT_FIELDS:
            value = record[name]
            if name == "angles":
                cells.append(";".join(format_number(float(a)) for a in value))
            elif name == "violated":
                cells.append("true" if value else "false")
            else:
                cells.append(format_number(value))
        stream.write(",".join(cells) + "\n")


def emit(config, rows):
    if config.out:
        with open(config.out, "w") as fh:
            write_rows(config, rows, fh)
    else:
        write_rows(config, rows, sys.stdout)


def write_plot_data(path, columns, header):
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for values in zip(*columns):
            fh.write(",".join(format_number(float(v)) for v in values) + "\n")


def cmd_correlate(config):
    """Correlator values for the configured angle pairs, one row per regime."""
    state = StateSpec(n=config.n, p=config.p)
    pure = StateSpec(n=config.n, p=1.0)
    params = CoarseningParams(
        delta=math.sqrt(config.delta_sq),
        Delta=math.sqrt(config.Delta_sq),
        sigmas=config.sigmas,
        quadrature_order=config.quadrature_order,
    )
    kernel = params.discrete_kernel()
    rows = []
    for ti, tj in config.angle_pairs:
        regimes = [
            ("corr_resolution", corr_resolution(ti, tj, pure, kernel)),
            ("corr_reference", corr_reference(ti, tj, params.Delta)),
            ("corr_full", corr_full(ti, tj, pure, params)),
            ("corr_werner_resolution", corr_werner_resolution(ti, tj, state, kernel)),
            ("corr_werner_full", corr_werner_full(ti, tj, state, params)),
        ]
        for name, value in regimes:
            rows.append(
                ResultRow(
                    m=config.m,
                    n=config.n,
                    p=config.p,
                    delta_sq=config.delta_sq,
                    Delta_sq=config.Delta_sq,
                    witness_kind=name,
                    witness_value=value,
                    bound=float("nan"),
                    violated=False,
                    angles=[ti, tj],
                    seed=config.seed,
                )
            )
    emit(config, rows)
    return 0


def _profile_chunk(config, axis, chunk):
    """Warm-swept optimization over one contiguous chunk of the variance grid."""
    spec = config.witness_spec()
    state = StateSpec(n=config.n, p=config.p)
    correlators = []
    for variance in chunk:
        if axis == "delta_sq":
            params = CoarseningParams(
                delta=math.sqrt(variance),
                Delta=math.sqrt(config.Delta_sq),
                sigmas=config.sigmas,
                quadrature_order=config.quadrature_order,
            )
        else:
            params = CoarseningParams(
                delta=math.sqrt(config.delta_sq),
                Delta=math.sqrt(variance),
                sigmas=config.sigmas,
                quadrature_order=config.quadrature_order,
            )
        correlators.append(Correlator(state, params))
    return maximize_profile(spec, correlators, config.optimizer_config())


def cmd_profile(config):
    """Optimized witness value along a one-dimensional variance grid."""
    if config.delta_sq_grid and config.Delta_sq_grid:
        raise ConfigError("delta_sq_grid/Delta_sq_grid: profile sweeps one grid at a time")
    if config.delta_sq_grid:
        axis, grid = "delta_sq", list(config.delta_sq_grid)
    elif config.Delta_sq_grid:
        axis, grid = "Delta_sq", list(config.Delta_sq_grid)
    else:
        raise ConfigError("delta_sq_grid: profile requires a variance grid")
    spec = config.witness_spec()

    workers = min(config.worker_count(), len(grid))
    chunks = [list(c) for c in np.array_split(grid, workers)]
    results = []
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_profile_chunk, config, axis, chunk) for chunk in chunks]
        for future in futures:
            results.extend(future.result())

    rows = []
    for variance, result in zip(grid, results):
        delta_sq = variance if axis == "delta_sq" else config.delta_sq
        Delta_sq = variance if axis == "Delta_sq" else config.Delta_sq
        rows.append(
            ResultRow(
                m=config.m,
                n=config.n,
                p=config.p,
                delta_sq=delta_sq,
                Delta_sq=Delta_sq,
                witness_kind=config.witness,
                witness_value=result.value,
                bound=spec.bound,
                violated=result.value > spec.bound,
                angles=list(result.angles.alice) + list(result.angles.bob),
                seed=config.seed,
            )
        )
    emit(config, rows)
    if config.out:
        write_plot_data(
            config.out + ".plot.csv",
            [grid, [r.witness_value for r in rows], [spec.bound] * len(rows)],
            "variance,witness_value,bound",
        )
    return 0


def cmd_boundary(config):
    """Trace the transition curve delta_c^2(Delta^2) over the Delta^2 grid."""
    if not config.Delta_sq_grid:
        raise ConfigError("Delta_sq_grid: boundary requires a Delta^2 grid")
    spec = config.witness_spec()
    state = StateSpec(n=config.n, p=config.p)
    curve = trace_boundary(
        spec,
        state,
        config.Delta_sq_grid,
        tol=config.transition_tol,
        config=config.optimizer_config(),
        sigmas=config.sigmas,
        quadrature_order=config.quadrature_order,
    )
    if not curve.points:
        raise TransitionError("no boundary point found on the supplied grid")
    rows = []
    for pt in curve.points:
        rows.append(
            ResultRow(
                m=config.m,
                n=config.n,
                p=config.p,
                delta_sq=pt.delta_sq,
                Delta_sq=pt.Delta_sq,
                witness_kind=config.witness,
                witness_value=pt.achieved_value,
                bound=pt.bound,
                violated=False,
                angles=list(pt.angles.alice) + list(pt.angles.bob),
                seed=config.seed,
            )
        )
    emit(config, rows)
    if config.out:
        write_plot_data(
            config.out + ".plot.csv",
            [curve.Delta_sq(), curve.delta_sq()],
            "Delta_sq,delta_sq",
        )
    return 0


def cmd_table1(config):
    """Transition variances for m = 2 at each configured visibility.

    Prints a table with the computed values, the reference values and the
    relative deviations; rows are also emitted through the standard writer
    when an output path is set.
    """
    opt_config = config.optimizer_config()
    rows = []
    lines = [
        f"{'p':>6} {'witness':>9} {'d2(D=0)':>10} {'ref':>10} {'rel':>9}"
        f" {'D2(d=0)':>10} {'ref':>10} {'rel':>9}"
    ]
    for p in config.p_list:
        state = StateSpec(n=config.n, p=p)
        for kind, spec in (("bell", bell_spec(2)), ("steering", steering_spec(2))):
            d2 = find_critical_delta(
                spec, state, Delta_fixed=0.0, tol=config.transition_tol,
                config=opt_config, sigmas=config.sigmas,
                quadrature_order=config.quadrature_order,
            )
            D2 = find_critical_Delta(
                spec, state, delta_fixed=0.0, tol=config.transition_tol,
                config=opt_config, sigmas=config.sigmas,
                quadrature_order=config.quadrature_order,
            )
            ref = TABLE1_REFERENCE.get(round(p, 2))
            if ref is not None:
                ref_d2, ref_D2 = (ref[0], ref[1]) if kind == "bell" else (ref[2], ref[3])
                rel_d2 = (d2.delta_sq - ref_d2) / ref_d2
                rel_D2 = (D2.Delta_sq - ref_D2) / ref_D2
                lines.append(
                    f"{p:>6.2f} {kind:>9} {d2.delta_sq:>10.4f} {ref_d2:>10.4f}"
                    f" {rel_d2:>9.2%} {D2.Delta_sq:>10.5f} {ref_D2:>10.5f} {rel_D2:>9.2%}"
                )
            else:
                lines.append(
                    f"{p:>6.2f} {kind:>9} {d2.delta_sq:>10.4f} {'-':>10}"
                    f" {'-':>9} {D2.Delta_sq:>10.5f} {'-':>10} {'-':>9}"
                )
            for pt in (d2, D2):
                rows.append(
                    ResultRow(
                        m=2,
                        n=config.n,
                        p=p,
                        delta_sq=pt.delta_sq,
                        Delta_sq=pt.Delta_sq,
                        witness_kind=kind,
                        witness_value=pt.achieved_value,
                        bound=pt.bound,
                        violated=False,
                        angles=list(pt.angles.alice) + list(pt.angles.bob),
                        seed=config.seed,
                    )
                )
    print("\n".join(lines))
    if config.out:
        emit(config, rows)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fuzzycorr",
        description="Coarse-grained Bell/steering witnesses and transition search",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func in (
        ("correlate", cmd_correlate),
        ("profile", cmd_profile),
        ("boundary", cmd_boundary),
        ("table1", cmd_table1),
    ):
        cmd = sub.add_parser(name, help=func.__doc__.splitlines()[0])
        cmd.set_defaults(func=func)
        cmd.add_argument("--config", help="JSON configuration file")
        cmd.add_argument("--m", type=int)
        cmd.add_argument("--n", type=int)
        cmd.add_argument("--p", type=float)
        cmd.add_argument("--witness", choices=["bell", "steering"])
        cmd.add_argument("--delta-sq-grid", dest="delta_sq_grid", metavar="a:b:step")
        cmd.add_argument("--Delta-sq-grid", dest="Delta_sq_grid", metavar="a:b:step")
        cmd.add_argument("--seed", type=int)
        cmd.add_argument("--threads", type=int)
        cmd.add_argument("--restarts", type=int)
        cmd.add_argument("--transition-tol", dest="transition_tol", type=float)
        cmd.add_argument("--format", choices=["csv", "json"])
        cmd.add_argument("--out")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args)
        return args.func(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TransitionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
