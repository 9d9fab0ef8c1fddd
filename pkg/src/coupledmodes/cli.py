"""Command-line driver.

Usage::

    coupledmodes simulate scenario.ini --out traj.csv --plot traj.svg --report report.txt
    coupledmodes oracle-check scenario.ini --report fidelities.txt

Exit status: 0 on success, 1 for configuration errors, 2 for numerical failures.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bath
from .config import ConfigError, ScenarioConfig, parse_config
from .errors import CoupledModesError
from .modespace import Trajectory, decompose, evolve_two_mode, trajectory
from .oracle import coherence_scan
from .output import fmt, report_text, trajectory_csv, trajectory_svg

log = logging.getLogger("coupledmodes")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


@dataclass
class RunResult:
    config: ScenarioConfig
    trajectory: Trajectory
    report: dict


def _two_mode_trajectory(config: ScenarioConfig, times: np.ndarray) -> Trajectory:
    delta, lam = config.two_mode
    alpha, beta = config.alpha
    amps = np.array([evolve_two_mode(alpha, beta, delta, lam, t) for t in times])
    return Trajectory(times=times, amplitudes=amps)


def run(config: ScenarioConfig) -> RunResult:
    """Simulate the scenario and assemble the report (no file output)."""
    times = config.times()
    report: dict = {"kind": config.kind, "n_modes": config.system.n, "n_times": len(times)}

    # signed couplings go through the general normal-mode path
    if config.kind == "two-mode" and config.two_mode[1] >= 0.0:
        traj = _two_mode_trajectory(config, times)
    else:
        d = decompose(config.system)
        traj = trajectory(d, config.alpha, times)
        report["normal_mode_frequencies"] = ", ".join(fmt(m) for m in d.mu) if config.system.n <= 16 else "omitted"

    total = traj.photon_numbers.sum(axis=1)
    report["total_photon_number"] = float(total[0])
    report["max_photon_number_drift"] = float(np.max(np.abs(total - total[0])))

    if config.kind == "star-bath":
        spec = config.bath
        window = config.fit_window if config.fit_window is not None else bath.default_fit_window(spec, traj)
        fit = bath.fit_decay_rate(traj, 0, window)
        predicted = bath.predicted_amplitude_rate(spec)
        recurrence = bath.estimate_recurrence_time(spec)
        report.update(
            fitted_rate=fit.rate,
            predicted_rate=predicted,
            rate_relative_error=abs(fit.rate - predicted) / predicted if predicted > 0 else None,
            r2=fit.r2,
            fit_window_end=fit.window_end,
            fit_samples=fit.n_samples,
            recurrence_time=recurrence,
            revival_time=bath.find_revival(traj, 0, after=0.5 * recurrence, threshold=0.5 * abs(spec.alpha0)),
            final_system_amplitude=float(abs(traj.amplitudes[-1, 0])),
        )
    elif config.kind == "oracle-check":
        fids = coherence_scan(config.system, config.alpha, times, config.fock)
        report["n_max"] = config.fock.n_max
        for i, (t, f) in enumerate(zip(times, fids)):
            report[f"t_{i}"] = float(t)
            report[f"fidelity_{i}"] = f
        report["min_fidelity"] = float(min(fids))
    return RunResult(config=config, trajectory=traj, report=report)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coupledmodes", description="Coherent-state dynamics of linearly coupled bosonic modes.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_text in (
        ("simulate", "evolve a two-mode, general or star-bath scenario"),
        ("oracle-check", "compare the closed form with truncated Fock-space evolution"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", type=Path, help="scenario file")
        p.add_argument("--out", type=Path, help="CSV trajectory (default: standard output)")
        p.add_argument("--plot", type=Path, help="SVG plot of |alpha_j(t)|")
        p.add_argument("--report", type=Path, help="key = value report (default: standard error)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        text = args.config.read_text(encoding="utf-8")
        config = parse_config(text)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: cannot read {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    want_oracle = args.command == "oracle-check"
    if want_oracle != (config.kind == "oracle-check"):
        print(f"error: {args.config}: kind '{config.kind}' cannot be run with '{args.command}'", file=sys.stderr)
        return EXIT_CONFIG

    try:
        log.info("running %s scenario with %d modes", config.kind, config.system.n)
        result = run(config)
    except CoupledModesError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    csv_text = trajectory_csv(result.trajectory)
    report = report_text(result.report)
    try:
        if args.out:
            args.out.write_text(csv_text, encoding="utf-8", newline="")
        else:
            sys.stdout.write(csv_text)
        if args.plot:
            title = f"{config.kind}: |alpha_j(t)|"
            args.plot.write_text(trajectory_svg(result.trajectory, title=title), encoding="utf-8")
        if args.report:
            args.report.write_text(report, encoding="utf-8")
        else:
            sys.stderr.write(report)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
