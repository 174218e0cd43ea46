"""Command-line entry point: ``dampwave <subcommand> [options]``.

Exit status: 0 on PASS or a finished run, 2 when an experiment verdict is
FAIL, 1 on usage or configuration errors.  Diagnostics go to standard
error; ``rates`` prints its table to standard output.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, RunConfig, load_config

SUBCOMMANDS = ("simulate", "decay", "profile", "lifespan", "rates", "selftest")


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dampwave", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", metavar="PATH", help="TOML run configuration")
        sp.add_argument("--out", metavar="DIR", help="output directory (overrides [output] dir)")
        sp.add_argument("--seed", type=int, default=0, help="seed recorded in the manifest")
        sp.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
        if name == "rates":
            for flag, typ in (("n", int), ("p", float), ("r", float), ("s", float),
                              ("alpha", float), ("lam", float), ("m", float), ("slack", float)):
                sp.add_argument(f"--{flag}", type=typ, default=None)
    return parser


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load(args) -> RunConfig:
    if not args.config:
        raise UsageError(f"{args.command} needs --config PATH")
    try:
        return load_config(args.config)
    except OSError as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from None


def _finish(report, cfg: RunConfig, args) -> int:
    from .output import write_outputs

    out_dir = args.out or cfg.output.dir
    path = write_outputs(report, out_dir, seed=args.seed)
    verdict = "PASS" if report.passed else "FAIL"
    _err(f"{report.kind}: {verdict}; manifest {path}")
    return 0 if report.passed else 2


def _rates(args) -> int:
    from .experiments.theory import format_rates, theory_rates

    if args.config:
        pb = _load(args).problem
        params = dict(n=pb.n, p=pb.p, r=pb.r, s=pb.s, alpha=pb.alpha, lam=pb.lam)
    else:
        params = dict(n=1, p=2.0, r=1.0, s=0.5, alpha=0.6, lam=None)
    for key in ("n", "p", "r", "s", "alpha", "lam"):
        if getattr(args, key) is not None:
            params[key] = getattr(args, key)
    m = 2.0 if args.m is None else args.m
    slack = 0.0 if args.slack is None else args.slack
    try:
        rates = theory_rates(params["n"], params["p"], params["r"], params["s"],
                             params["alpha"], params["lam"], m=m, slack=slack)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(format_rates(rates))
    return 0


def run_command(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        if args.command == "rates":
            return _rates(args)
        if args.command == "selftest":
            from .selftest import run_selftest

            return 0 if run_selftest(args.seed, report=_err) else 2
        cfg = _load(args)
        if cfg.experiment.kind != args.command:
            _err(f"note: config experiment kind {cfg.experiment.kind!r} differs from "
                 f"subcommand {args.command!r}; running {args.command}")
        if args.command == "simulate":
            from .experiments.simulate import run_simulation

            return _finish(run_simulation(cfg), cfg, args)
        if args.command == "decay":
            from .experiments.decay import decay_experiment

            return _finish(decay_experiment(cfg), cfg, args)
        if args.command == "profile":
            from .experiments.profile import diffusion_profile_experiment

            return _finish(diffusion_profile_experiment(cfg), cfg, args)
        from .experiments.lifespan import SweepError, lifespan_sweep

        if len(cfg.experiment.eps_list) < 3:
            raise UsageError(f"lifespan needs at least 3 eps values in [experiment] eps_list, "
                             f"got {len(cfg.experiment.eps_list)}")
        try:
            report = lifespan_sweep(cfg, threads=args.threads)
        except SweepError as exc:
            _err(f"lifespan: FAIL ({exc})")
            return 2
        return _finish(report, cfg, args)
    except UsageError as exc:
        _err(f"error: {exc}")
        return 1
    except ConfigError as exc:
        _err("configuration error:\n  " + "\n  ".join(exc.violations))
        return 1
    except OSError as exc:
        _err(f"I/O error: {exc}")
        return 1


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
