"""Command-line entry point: ``gotto <experiment> [--config PATH] [--out DIR] [--workers N] [--key value ...]``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import EXPERIMENTS, FIELDS, ConfigError, resolve_manifest
from .errors import IntegrationAccuracyError, InvalidArgument, InvalidState, NumericalDegeneracy
from .experiments import RUNNERS

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

log = logging.getLogger("gaussian_otto")


def _overrides(extra: list[str]) -> dict[str, str]:
    """Turns ``--key value`` / ``--key=value`` pairs into a dict."""
    out = {}
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--") or len(tok) <= 2:
            raise ConfigError(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, value = key.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(extra):
                raise ConfigError(f"missing value for --{key}")
            value = extra[i + 1]
            i += 2
        key = key.replace("-", "_")
        if key not in FIELDS:
            raise ConfigError(f"unknown option --{key}")
        out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gotto",
        description="Gaussian simulation of an Otto engine between finite harmonic-ring baths.",
        epilog="Any manifest key may be given as --key value; environment variables GOTTO_<KEY> sit "
        "between the config file and the command line in precedence.",
    )
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--config", type=Path, default=None, help="flat key = value manifest file")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory (created if missing)")
    p.add_argument("--workers", type=int, default=1, help="parallel processes for sweeps")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        manifest = resolve_manifest(args.config, _overrides(extra))
        # build the physical configuration up front so parameter errors surface as config errors
        if args.experiment in ("otto", "correlations"):
            manifest.engine_config()
        else:
            manifest.hot_bath(), manifest.working_medium(), manifest.coupling(), manifest.profile()
    except InvalidArgument as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        args.out.mkdir(parents=True, exist_ok=True)
        paths = RUNNERS[args.experiment](manifest, args.out, args.workers)
    except (IntegrationAccuracyError, NumericalDegeneracy, InvalidState) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except InvalidArgument as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1
    for path in paths:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
