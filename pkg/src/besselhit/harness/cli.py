"""Command-line front end: ``besselhit <experiment> [flags]``.

Exit status: 0 ok, 1 validation failure, 2 configuration error, 3 numeric error.
"""

import argparse
import sys

from ..errors import ConfigError, DomainError, NumericError
from .config import EXPERIMENTS, FORMATS, build_config, read_config_file
from .experiments import run_experiment
from .output import render

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def _float_list(text):
    try:
        return tuple(float(v) for v in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags given here override it")
    common.add_argument("--delta", type=_float_list, help="dimension(s), comma separated")
    common.add_argument("--level", type=_float_list, help="level(s) L, comma separated")
    common.add_argument("--gamma", type=float, help="shell fraction in (0, 1) (default 0.95)")
    common.add_argument("--eps", type=_float_list, help="epsilon(s) on L^2 - M^2")
    common.add_argument("--reps", type=int, help="independent replications per grid point")
    common.add_argument("--seed", type=int, help="root seed (default 2024)")
    common.add_argument("--fast-first-step", action="store_true", default=None, help="single boundary for the first step from 0")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=FORMATS, help="output encoding (default csv)")
    common.add_argument("--k-max", type=int, help="steps-vs-eps: largest k in epsilon = 0.5^k")
    common.add_argument("--bins", type=int, help="hist: number of bins")
    common.add_argument("--eps-ratio", type=float, help="steps-vs-level: epsilon/L in the fixed-ratio mode")
    common.add_argument("--quick", action="store_true", default=None, help="validate: reduced sample sizes")

    parser = _Parser(prog="besselhit", description="Bessel hitting-time experiments")
    sub = parser.add_subparsers(dest="experiment", required=True, parser_class=_Parser)
    for name in EXPERIMENTS:
        sub.add_parser(name, parents=[common])
    return parser


def _overrides(args):
    return dict(
        dims=args.delta,
        levels=args.level,
        gamma=args.gamma,
        epsilons=args.eps,
        reps=args.reps,
        seed=args.seed,
        fast_first_step=args.fast_first_step,
        out=args.out,
        format=args.format,
        k_max=args.k_max,
        bins=args.bins,
        eps_ratio=args.eps_ratio,
        quick=args.quick,
    )


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        file_values = read_config_file(args.config) if args.config else {}
        cfg = build_config(args.experiment, file_values, _overrides(args))
        table = run_experiment(cfg)
    except (ConfigError, DomainError) as exc:
        print(f"besselhit: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"besselhit: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = render(table, cfg.format)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.experiment == "validate" and not table.metadata.get("passed", False):
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
