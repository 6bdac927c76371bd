"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 an inequality was violated.
"""

from __future__ import annotations

import argparse
import collections
import csv
import json
import logging
import math
import os
import sys

import numpy as np

from .config import ConfigError, load_config
from .correlations import OptimizerConfig
from .measurement import MeasurementModel, random_model, run_measurement
from .report import analyze, to_report

log = logging.getLogger("qmeas")

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2

SWEEP_RANGES = {"spectrum_p": (0.0, 1.0), "amp_theta": (0.0, math.pi / 4)}
SWEEP_HEADER = ["param", "I_m", "S_rho", "sum", "logN", "margin", "disturbance"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _setup_logging() -> None:
    level = os.environ.get("QMEAS_LOG", "").lower()
    levels = {"debug": logging.DEBUG, "info": logging.INFO}
    logging.basicConfig(
        level=levels.get(level, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def cmd_run(args) -> int:
    model, cfg = load_config(args.config).build()
    log.info("running model d_s=%d N=%d", model.d_s, model.n)
    an = analyze(model, cfg)
    print(json.dumps(to_report(an, full=args.full), indent=2))
    for c in an.checks:
        if c.status == "failed":
            log.warning("inequality violated: %s", c.name)
    return EXIT_VIOLATION if an.violated else EXIT_OK


def _sweep_model(base: MeasurementModel, param: str, value: float) -> MeasurementModel:
    if param == "spectrum_p":
        r = np.zeros(base.n)
        r[0], r[1] = value, 1.0 - value
        return MeasurementModel(base.amplitudes, np.clip(r, 0.0, None), base.basis)
    a = np.zeros(base.d_s, dtype=complex)
    a[0], a[1] = math.cos(value), math.sin(value)
    return MeasurementModel(a, base.spectrum, base.basis)


def sweep_rows(base: MeasurementModel, param: str, steps: int, start=None, stop=None):
    if param not in SWEEP_RANGES:
        raise UsageError(f"unknown sweep parameter {param!r}; choose from {sorted(SWEEP_RANGES)}")
    if steps < 2:
        raise UsageError("--steps must be at least 2")
    if param == "spectrum_p" and base.n < 2:
        raise UsageError("spectrum_p needs an apparatus dimension of at least 2")
    if param == "amp_theta" and base.d_s < 2:
        raise UsageError("amp_theta needs a system dimension of at least 2")
    lo, hi = SWEEP_RANGES[param]
    lo = lo if start is None else start
    hi = hi if stop is None else stop
    if param == "spectrum_p" and not (0.0 <= lo <= 1.0 and 0.0 <= hi <= 1.0):
        raise UsageError("spectrum_p range must lie in [0, 1]")
    log_n = math.log2(base.n)
    for value in np.linspace(lo, hi, steps):
        o = run_measurement(_sweep_model(base, param, float(value)))
        total = o.info_gain + o.apparatus_entropy
        yield [value, o.info_gain, o.apparatus_entropy, total, log_n, log_n - total, o.disturbance]


def cmd_sweep(args) -> int:
    model, _ = load_config(args.config).build()
    rows = list(sweep_rows(model, args.param, args.steps, args.start, args.stop))
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        for row in rows:
            writer.writerow([f"{x:.9g}" for x in row])
    log.info("wrote %d rows to %s", len(rows), args.out)
    return EXIT_OK


def fuzz(n: int, seed: int, max_dim: int, restarts: int = 1, max_iters: int = 80):
    """Counts of check outcomes over ``n`` random models."""
    if n < 1:
        raise UsageError("--n must be at least 1")
    if not 2 <= max_dim <= 4:
        raise UsageError("--max-dim must be between 2 and 4")
    cfg = OptimizerConfig(restarts=restarts, max_iters=max_iters, seed=seed)
    counts = collections.defaultdict(lambda: {"passed": 0, "failed": 0, "inconclusive": 0, "certified": 0})
    for i in range(n):
        rng = np.random.default_rng([seed, i])
        model = random_model(rng, max_dim)
        an = analyze(model, cfg, classical=False)
        for c in an.checks:
            counts[c.name][c.status] += 1
            counts[c.name]["certified"] += int(c.certified)
        log.debug("model %d: d_s=%d N=%d", i, model.d_s, model.n)
    return {"n": n, "seed": seed, "max_dim": max_dim, "checks": {k: counts[k] for k in sorted(counts)}}


def cmd_fuzz(args) -> int:
    summary = fuzz(args.n, args.seed, args.max_dim, args.restarts, args.max_iters)
    print(json.dumps(summary, separators=(",", ":")))
    failed = sum(c["failed"] for c in summary["checks"].values())
    return EXIT_VIOLATION if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qmeas", description="Information and entanglement in a measurement with a mixed apparatus.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="analyze one model and print a JSON report")
    run.add_argument("--config", required=True)
    run.add_argument("--full", action="store_true", help="include matrices in the report")
    run.set_defaults(func=cmd_run)

    sweep = sub.add_parser("sweep", help="one-parameter sweep written as CSV")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--param", required=True, help="spectrum_p or amp_theta")
    sweep.add_argument("--steps", type=int, required=True)
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--start", type=float, default=None)
    sweep.add_argument("--stop", type=float, default=None)
    sweep.set_defaults(func=cmd_sweep)

    fz = sub.add_parser("fuzz", help="check the inequalities on random models")
    fz.add_argument("--n", type=int, required=True)
    fz.add_argument("--seed", type=int, required=True)
    fz.add_argument("--max-dim", type=int, required=True)
    fz.add_argument("--restarts", type=int, default=1)
    fz.add_argument("--max-iters", type=int, default=80)
    fz.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, UsageError) as exc:
        print(f"qmeas: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qmeas: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
