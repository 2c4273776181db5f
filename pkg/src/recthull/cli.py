"""Command line front end.

Subcommands:

* bounds    tabulate the closed-form miscoverage bracket over B and delta
* bias      bias report for a CSV sample around a center
* hulc      fit a rectangular-hull confidence region from a CSV sample
* simulate  seeded validation experiments writing a fixed CSV schema

Exit codes: 0 success, 2 usage or input error, 3 estimator failure,
4 validation-check failure.  All floating output uses 12 significant digits;
randomized subcommands require an explicit --seed.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import shlex
import subprocess
import sys

import numpy as np
from scipy.special import ndtri

from .bias import bias_report, o_med_bias_mch, omb_general
from .bounds import batch_count, lower_bound, randomized_batches, upper_bound
from .hull import Box, EstimatorFailure, hulc_region, vertex_randomized_estimator
from .signs import SignMeasure
from .simulate import (
    DiscreteSign,
    Gaussian,
    edge_reference_measure,
    enumerate_miscoverage,
    four_point_disk,
    mc_hulc_coverage,
    mc_miscoverage,
    mch_reference_measure,
    oracle_miscoverage,
    random_sign_measure,
    replication_rng,
    sample,
    TiltedGaussian,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ESTIMATOR = 3
EXIT_CHECK = 4

SCHEMA = [
    "experiment",
    "d",
    "B",
    "alpha",
    "delta",
    "estimate",
    "std_error",
    "lower_bound",
    "upper_bound",
    "seed",
]


class CLIError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def _child_seed(seed: int, k: int) -> int:
    return int(np.random.SeedSequence(entropy=[int(seed), int(k)]).generate_state(1)[0])


def _parse_int_list(spec: str, name: str) -> list[int]:
    """Parse '4' or '1..8' into a list of ints."""
    try:
        if ".." in spec:
            lo_s, hi_s = spec.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(spec)]
    except ValueError:
        raise CLIError(f"{name} must look like '4' or '1..8', got {spec!r}") from None


def _parse_float_grid(spec: str, name: str) -> list[float]:
    """Parse '0.1' or 'start:stop:step' into a list of floats."""
    try:
        if ":" in spec:
            parts = spec.split(":")
            if len(parts) != 3:
                raise ValueError
            start, stop, step = (float(p) for p in parts)
            if step <= 0 or stop < start:
                raise ValueError
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            return [start + k * step for k in range(count)]
        return [float(spec)]
    except ValueError:
        raise CLIError(f"{name} must look like '0.1' or 'start:stop:step', got {spec!r}") from None


def _read_points_csv(path: str) -> np.ndarray:
    """Read observations from a CSV with header x_1,...,x_d."""
    try:
        fh = open(path, "r", newline="", encoding="utf-8")
    except OSError as exc:
        raise CLIError(f"cannot open {path}: {exc}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CLIError(f"{path}: empty file") from None
        d = len(header)
        if d < 1 or header != [f"x_{j + 1}" for j in range(d)]:
            raise CLIError(f"{path}: line 1: header must be x_1,...,x_d, got {header}")
        rows: list[list[float]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != d:
                raise CLIError(f"{path}: line {lineno}: expected {d} fields, got {len(row)}")
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise CLIError(f"{path}: line {lineno}: {exc}") from None
        if not rows:
            raise CLIError(f"{path}: no data rows")
        arr = np.array(rows, dtype=float)
        if not np.all(np.isfinite(arr)):
            bad = int(np.where(~np.isfinite(arr).all(axis=1))[0][0])
            raise CLIError(f"{path}: line {bad + 2}: non-finite value")
        return arr


@contextlib.contextmanager
def _open_output(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        try:
            fh = open(path, "w", newline="\n", encoding="utf-8")
        except OSError as exc:
            raise CLIError(f"cannot write {path}: {exc}") from None
        with fh:
            yield fh


class SubprocessEstimator:
    """External batch estimator: CSV on stdin, d whitespace-separated decimals on stdout.

    The child receives the batch with an x_1,...,x_d header, one observation
    per line, and must exit with status 0; anything else is an estimator
    failure.
    """

    def __init__(self, command: str, d: int):
        self.argv = shlex.split(command)
        if not self.argv:
            raise CLIError(f"empty estimator command {command!r}")
        self.d = int(d)

    def __call__(self, rows) -> np.ndarray:
        arr = np.asarray(rows, dtype=float)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([f"x_{j + 1}" for j in range(arr.shape[1])])
        for row in arr:
            writer.writerow([f"{v:.17g}" for v in row])
        try:
            proc = subprocess.run(
                self.argv, input=buf.getvalue(), capture_output=True, text=True, check=False
            )
        except OSError as exc:
            raise EstimatorFailure(f"cannot run estimator command: {exc}") from None
        if proc.returncode != 0:
            detail = proc.stderr.strip().splitlines()
            raise EstimatorFailure(
                f"estimator command exited with status {proc.returncode}"
                + (f": {detail[-1][:200]}" if detail else "")
            )
        parts = proc.stdout.split()
        if len(parts) != self.d:
            raise EstimatorFailure(f"estimator wrote {len(parts)} numbers, expected {self.d}")
        try:
            values = np.array([float(p) for p in parts])
        except ValueError:
            raise EstimatorFailure(f"estimator output is not numeric: {proc.stdout[:200]!r}") from None
        return values


def _resolve_cli_estimator(spec: str, d: int):
    if spec in ("mean", "median"):
        return spec
    return SubprocessEstimator(spec, d)


def _write_schema_rows(fh, rows: list[dict]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SCHEMA)
    for row in rows:
        writer.writerow([_fmt(row.get(key)) for key in SCHEMA])


def _row(experiment: str, seed: int, **kw) -> dict:
    row = {key: None for key in SCHEMA}
    row["experiment"] = experiment
    row["seed"] = seed
    for key, val in kw.items():
        if key not in SCHEMA:
            raise KeyError(key)
        row[key] = val
    return row


# ---------------------------------------------------------------------------
# subcommands


def cmd_bounds(args) -> int:
    alpha = args.alpha
    d = args.d
    b_count = batch_count(alpha, d)
    tau, _ = randomized_batches(alpha, d, 0.0)
    b_values = _parse_int_list(args.b_range, "--B") if args.b_range else list(range(1, b_count + 1))
    deltas = _parse_float_grid(args.delta_grid, "--delta-grid")
    with _open_output(args.output) as fh:
        fh.write(f"# alpha={_fmt(alpha)} d={d} batch_count={b_count} tau={_fmt(tau)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["B", "delta", "lower_bound", "upper_bound"])
        for b in b_values:
            for delta in deltas:
                writer.writerow([b, _fmt(delta), _fmt(lower_bound(b, delta, d)), _fmt(upper_bound(b, delta, d))])
    return EXIT_OK


def cmd_bias(args) -> int:
    pts = _read_points_csv(args.input)
    d = pts.shape[1]
    if args.center is None:
        center = np.zeros(d)
    else:
        try:
            center = np.array([float(v) for v in args.center.split(",")])
        except ValueError:
            raise CLIError(f"--center must be comma-separated decimals, got {args.center!r}") from None
        if center.size != d:
            raise CLIError(f"--center must have {d} coordinates, got {center.size}")
    report = bias_report(
        pts,
        center,
        tukey_method=args.tukey,
        n_directions=args.directions,
        seed=args.seed,
        zero_tol=args.zero_tol,
    )
    with _open_output(args.output) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["metric", "value", "method"])
        for name, value in (("r_bias", report.r_bias), ("t_bias", report.t_bias), ("o_bias", report.o_bias)):
            writer.writerow([name, _fmt(value), report.method_notes[name]])
    print(
        f"n={pts.shape[0]} d={d} r_bias={_fmt(report.r_bias)} "
        f"t_bias={_fmt(report.t_bias)} o_bias={_fmt(report.o_bias)}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_hulc(args) -> int:
    pts = _read_points_csv(args.data)
    d = pts.shape[1]
    estimator = _resolve_cli_estimator(args.estimator, d)
    result = hulc_region(pts, estimator, args.alpha, args.seed, d=d)
    with _open_output(args.output) as fh:
        fh.write(
            f"# alpha={_fmt(args.alpha)} seed={args.seed} d={d} b_star={result.b_star} "
            f"tau={_fmt(result.tau)} n={pts.shape[0]} n_used={result.n_used} "
            f"n_discarded={result.n_discarded}\n"
        )
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["record"] + [f"x_{j + 1}" for j in range(d)])
        writer.writerow(["lower"] + [_fmt(v) for v in result.box.lower])
        writer.writerow(["upper"] + [_fmt(v) for v in result.box.upper])
        for j, est in enumerate(result.batch_estimates, start=1):
            writer.writerow([f"batch_estimate_{j}"] + [_fmt(v) for v in est])
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate experiments


def _exp_oracle_check(args) -> tuple[list[dict], list[str]]:
    b_values = _parse_int_list(args.b_range, "--B") if args.b_range else [3]
    rows, failures = [], []
    targets = {3: {"axis-free": 0.472, "axis-mass": 0.484}}
    measures = [("axis-free", mch_reference_measure()), ("axis-mass", edge_reference_measure())]
    for b in b_values:
        for i, (name, measure) in enumerate(measures):
            exact = oracle_miscoverage(measure, b)
            brute = enumerate_miscoverage(measure, b)
            if abs(exact - brute) > 1e-12:
                failures.append(
                    f"oracle-check: {name} B={b}: inclusion-exclusion {exact!r} vs enumeration {brute!r}"
                )
            expected = targets.get(b, {}).get(name)
            if expected is not None and abs(exact - expected) > 1e-12:
                failures.append(f"oracle-check: {name} B={b}: exact value {exact!r} != {expected}")
            mc = mc_miscoverage(
                DiscreteSign(measure), np.zeros(2), b, args.reps, _child_seed(args.seed, 100 * b + i)
            )
            if abs(mc.estimate - exact) > 3.0 * mc.std_error + 1e-9:
                failures.append(
                    f"oracle-check: {name} B={b}: Monte Carlo {mc.estimate} vs exact {exact} "
                    f"beyond 3 x {mc.std_error}"
                )
            rows.append(
                _row(
                    "oracle-check",
                    args.seed,
                    d=2,
                    B=b,
                    delta=omb_general(measure),
                    estimate=mc.estimate,
                    std_error=mc.std_error,
                    lower_bound=exact,
                    upper_bound=exact,
                )
            )
    return rows, failures


def _exp_sandwich(args) -> tuple[list[dict], list[str]]:
    b_values = _parse_int_list(args.b_range, "--B") if args.b_range else list(range(2, 7))
    rng = np.random.default_rng(args.seed)
    rows, failures = [], []
    for i in range(args.measures):
        m = random_sign_measure(args.d, rng, mch=True)
        delta = o_med_bias_mch(m)
        for b in b_values:
            mis = oracle_miscoverage(m, b)
            lo = lower_bound(b, delta, args.d)
            hi = upper_bound(b, delta, args.d)
            if not lo - 1e-12 <= mis <= hi + 1e-12:
                failures.append(
                    f"sandwich: measure {i} B={b}: miscoverage {mis!r} outside [{lo!r}, {hi!r}]"
                )
            rows.append(
                _row(
                    "sandwich",
                    args.seed,
                    d=args.d,
                    B=b,
                    delta=delta,
                    estimate=mis,
                    lower_bound=lo,
                    upper_bound=hi,
                )
            )
    return rows, failures


def _exp_general_upper(args) -> tuple[list[dict], list[str]]:
    b_values = _parse_int_list(args.b_range, "--B") if args.b_range else list(range(2, 7))
    rng = np.random.default_rng(args.seed)
    rows, failures = [], []
    for i in range(args.measures):
        m = random_sign_measure(args.d, rng, mch=False)
        delta = omb_general(m)
        for b in b_values:
            mis = oracle_miscoverage(m, b)
            hi = upper_bound(b, delta, args.d)
            if mis > hi + 1e-9:
                failures.append(
                    f"general-upper: measure {i} B={b}: miscoverage {mis!r} above bound {hi!r}"
                )
            rows.append(
                _row(
                    "general-upper",
                    args.seed,
                    d=args.d,
                    B=b,
                    delta=delta,
                    estimate=mis,
                    upper_bound=hi,
                )
            )
    return rows, failures


def _exp_hull_miscoverage(args) -> tuple[list[dict], list[str]]:
    b_values = _parse_int_list(args.b_range, "--B") if args.b_range else [5]
    dist = Gaussian(np.zeros(args.d))
    rows, failures = [], []
    for b in b_values:
        mc = mc_miscoverage(dist, np.zeros(args.d), b, args.reps, _child_seed(args.seed, b))
        lo = lower_bound(b, 0.0, args.d)
        hi = upper_bound(b, 0.0, args.d)
        if not lo - 3.0 * mc.std_error <= mc.estimate <= hi + 3.0 * mc.std_error:
            failures.append(
                f"hull-miscoverage: B={b}: estimate {mc.estimate} outside "
                f"[{lo} - 3se, {hi} + 3se] with se={mc.std_error}"
            )
        rows.append(
            _row(
                "hull-miscoverage",
                args.seed,
                d=args.d,
                B=b,
                delta=0.0,
                estimate=mc.estimate,
                std_error=mc.std_error,
                lower_bound=lo,
                upper_bound=hi,
            )
        )
    return rows, failures


def _exp_coverage(args) -> tuple[list[dict], list[str]]:
    dist = Gaussian(np.zeros(args.d))
    result = mc_hulc_coverage(
        dist, "mean", np.zeros(args.d), args.alpha, args.n, args.reps, args.seed
    )
    slack = 0.01
    lo = args.alpha - 3.0 * result.std_error - slack
    hi = args.alpha + 3.0 * result.std_error + slack
    failures = []
    if not lo <= result.miscoverage <= hi:
        failures.append(
            f"coverage: miscoverage {result.miscoverage} outside [{lo}, {hi}] "
            f"(alpha={args.alpha}, se={result.std_error}, slack={slack})"
        )
    rows = [
        _row(
            "coverage",
            args.seed,
            d=args.d,
            B=batch_count(args.alpha, args.d),
            alpha=args.alpha,
            estimate=result.miscoverage,
            std_error=result.std_error,
            lower_bound=lo,
            upper_bound=hi,
        )
    ]
    return rows, failures


def _exp_vertex_bias(args) -> tuple[list[dict], list[str]]:
    """Orthant bias of the vertex-randomized estimator from a valid level-(1-gamma) box.

    Per replication, an asymmetric per-coordinate normal quantile box around a
    standard normal draw covers the origin with probability exactly 1 - gamma;
    the randomized vertex's sign pattern around the origin is tallied and the
    empirical sign measure's dispersal bias must stay below gamma / 2.
    """
    gamma = args.gamma
    d = args.d
    per_coord = (1.0 - gamma) ** (1.0 / d)
    t_hi = 0.25 * (1.0 - per_coord)
    t_lo = 0.75 * (1.0 - per_coord)
    c_hi = float(ndtri(1.0 - t_hi))
    c_lo = float(-ndtri(t_lo))
    counts: dict[tuple[int, ...], int] = {}
    for r in range(args.reps):
        rng = replication_rng(args.seed, r)
        z = rng.standard_normal(d)
        box = Box(lower=z - c_hi, upper=z + c_lo)
        est = vertex_randomized_estimator(box, args.delta_inflate, rng)
        key = tuple(1 if v > 0 else -1 for v in est)
        counts[key] = counts.get(key, 0) + 1
    measure = SignMeasure(d, {k: v / args.reps for k, v in counts.items()})
    est_bias = omb_general(measure)
    p_min = measure.orthant_mass_min()
    se = (2 ** (d - 1)) * np.sqrt(max(p_min * (1.0 - p_min), 1e-12) / args.reps)
    bound = gamma / 2.0
    failures = []
    if est_bias > bound + 3.0 * se:
        failures.append(
            f"vertex-bias: empirical bias {est_bias} above gamma/2={bound} + 3 x {se}"
        )
    rows = [
        _row(
            "vertex-bias",
            args.seed,
            d=d,
            alpha=gamma,
            delta=est_bias,
            estimate=est_bias,
            std_error=se,
            upper_bound=bound,
        )
    ]
    return rows, failures


def _exp_bias_demo(args) -> tuple[list[dict], list[str]]:
    cases = [
        ("four-point-disk", four_point_disk(), {"r_bias": 0.0, "t_bias": 0.25, "o_bias": 0.0}),
        ("tilted-gaussian", TiltedGaussian(), {"r_bias": 0.0, "t_bias": 0.0, "o_bias": 0.25}),
    ]
    tol = 0.02
    rows, failures = [], []
    for i, (name, dist, targets) in enumerate(cases):
        pts = sample(dist, args.n, _child_seed(args.seed, i))
        report = bias_report(pts, np.zeros(dist.d))
        values = {"r_bias": report.r_bias, "t_bias": report.t_bias, "o_bias": report.o_bias}
        for metric, target in targets.items():
            if abs(values[metric] - target) > tol:
                failures.append(
                    f"bias-demo: {name} {metric}={values[metric]} not within {tol} of {target}"
                )
            rows.append(
                _row(
                    "bias-demo",
                    args.seed,
                    d=dist.d,
                    estimate=values[metric],
                    lower_bound=target - tol,
                    upper_bound=target + tol,
                )
            )
    return rows, failures


EXPERIMENTS = {
    "oracle-check": (
        _exp_oracle_check,
        "exact vs enumerated vs Monte Carlo hull miss probability for the two reference measures",
    ),
    "sandwich": (_exp_sandwich, "bound bracket around the exact miss probability on random MCH measures"),
    "general-upper": (
        _exp_general_upper,
        "upper bound with dispersal bias on random measures with axis mass",
    ),
    "hull-miscoverage": (
        _exp_hull_miscoverage,
        "Monte Carlo hull miss frequency vs the zero-bias bounds for a gaussian",
    ),
    "coverage": (_exp_coverage, "end-to-end region miscoverage for the gaussian mean"),
    "vertex-bias": (
        _exp_vertex_bias,
        "orthant bias of the vertex-randomized estimator from a valid box",
    ),
    "bias-demo": (_exp_bias_demo, "bias functionals of the two demonstration distributions"),
}


_EXPERIMENT_DEFAULTS = {
    "coverage": {"reps": 10000, "n": 600},
    "bias-demo": {"n": 1000000},
}


def cmd_simulate(args) -> int:
    if args.experiment not in EXPERIMENTS:
        listing = "\n".join(f"  {name}: {desc}" for name, (_, desc) in sorted(EXPERIMENTS.items()))
        raise CLIError(f"unknown experiment {args.experiment!r}; available:\n{listing}")
    defaults = _EXPERIMENT_DEFAULTS.get(args.experiment, {})
    if args.reps is None:
        args.reps = defaults.get("reps", 100000)
    if args.n is None:
        args.n = defaults.get("n", 600)
    runner, _ = EXPERIMENTS[args.experiment]
    rows, failures = runner(args)
    with _open_output(args.output) as fh:
        _write_schema_rows(fh, rows)
    for message in failures:
        print(f"CHECK FAILED: {message}", file=sys.stderr)
    if failures:
        return EXIT_CHECK
    print(f"{args.experiment}: all checks passed ({len(rows)} rows)", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recthull",
        description="Rectangular-hull confidence regions, median biases, and miscoverage bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="tabulate the miscoverage bracket")
    p_bounds.add_argument("--alpha", type=float, required=True, help="miscoverage level in (0, 1)")
    p_bounds.add_argument("--d", type=int, required=True, help="dimension")
    p_bounds.add_argument("--B", dest="b_range", default=None, help="batch counts, e.g. 4 or 1..8")
    p_bounds.add_argument(
        "--delta-grid", default="0", help="orthant bias values, e.g. 0.1 or 0:0.5:0.01"
    )
    p_bounds.add_argument("--output", default=None, help="output CSV path (default stdout)")
    p_bounds.set_defaults(func=cmd_bounds)

    p_bias = sub.add_parser("bias", help="bias report for a CSV sample")
    p_bias.add_argument("--input", required=True, help="CSV with header x_1,...,x_d")
    p_bias.add_argument("--center", default=None, help="comma-separated center (default origin)")
    p_bias.add_argument("--tukey", choices=("auto", "exact", "sampled"), default="auto")
    p_bias.add_argument("--directions", type=int, default=10000, help="sampled-method directions")
    p_bias.add_argument("--zero-tol", type=float, default=0.0, help="tie threshold for signs")
    p_bias.add_argument("--seed", type=int, default=0, help="seed for sampled directions")
    p_bias.add_argument("--output", default=None, help="output CSV path (default stdout)")
    p_bias.set_defaults(func=cmd_bias)

    p_hulc = sub.add_parser("hulc", help="fit a rectangular-hull confidence region")
    p_hulc.add_argument("--data", required=True, help="CSV with header x_1,...,x_d")
    p_hulc.add_argument(
        "--estimator",
        default="mean",
        help="'mean', 'median', or an external command (CSV stdin -> d decimals stdout)",
    )
    p_hulc.add_argument("--alpha", type=float, default=0.05, help="miscoverage level")
    p_hulc.add_argument("--seed", type=int, required=True, help="seed for the randomized split")
    p_hulc.add_argument("--output", default=None, help="output CSV path (default stdout)")
    p_hulc.set_defaults(func=cmd_hulc)

    p_sim = sub.add_parser("simulate", help="seeded validation experiments")
    p_sim.add_argument("experiment", help="experiment name (pass an unknown name for a listing)")
    p_sim.add_argument("--seed", type=int, required=True, help="base seed for all replications")
    p_sim.add_argument(
        "--reps", type=int, default=None, help="Monte Carlo replications (default per experiment)"
    )
    p_sim.add_argument("--d", type=int, default=2, help="dimension")
    p_sim.add_argument("--B", dest="b_range", default=None, help="batch counts, e.g. 3 or 2..6")
    p_sim.add_argument("--alpha", type=float, default=0.1, help="miscoverage level")
    p_sim.add_argument("--gamma", type=float, default=0.1, help="box miscoverage for vertex-bias")
    p_sim.add_argument(
        "--n", type=int, default=None, help="sample size per replication (default per experiment)"
    )
    p_sim.add_argument("--measures", type=int, default=200, help="random measures to draw")
    p_sim.add_argument(
        "--delta-inflate", type=float, default=1e-6, help="vertex estimator inflation factor"
    )
    p_sim.add_argument("--output", default=None, help="output CSV path (default stdout)")
    p_sim.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except EstimatorFailure as exc:
        print(f"estimator failure: {exc}", file=sys.stderr)
        return EXIT_ESTIMATOR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
