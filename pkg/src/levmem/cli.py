"""Command line entry point.

    levmem <recipe> [--config PATH] [--out DIR] [--format csv|svg|both]
                    [--convention paper|standard] [--jobs N]

Exit status: 0 success, 2 some sweep points failed, 1 bad configuration or
usage.
"""

import argparse
import logging
import sys

from . import __version__
from .config import load_config
from .errors import ConfigError, LevmemError
from .recipes import RECIPES, run_recipe

EXIT_OK, EXIT_CONFIG, EXIT_PARTIAL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="levmem", description="Photon storage and retrieval in a levitated nanoparticle.")
    p.add_argument("recipe", choices=sorted(RECIPES), help="what to compute")
    p.add_argument("--config", help="JSON config (defaults to the shipped parameter set)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", choices=("csv", "svg", "both"), dest="formats")
    p.add_argument("--convention", choices=("paper", "standard"), help="fidelity and Wigner convention")
    p.add_argument("--cooperativity", choices=("consistent", "printed"))
    p.add_argument("--noise-model", choices=("physical", "kernel"))
    p.add_argument("--jobs", type=int, help="worker processes for sweeps")
    p.add_argument("--timestamp", action="store_true", help="stamp CSV headers with the run time")
    p.add_argument("-q", "--quiet", action="store_true")
    p.add_argument("--version", action="version", version=f"levmem {__version__}")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="levmem: %(levelname)s: %(message)s")
    if args.jobs is not None and args.jobs < 1:
        print("levmem: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config).with_options(
            fidelity_convention=args.convention, cooperativity=args.cooperativity,
            noise_model=args.noise_model,
        )
        result = run_recipe(args.recipe, cfg, out=args.out, formats=args.formats, jobs=args.jobs,
                            timestamp=args.timestamp or None)
    except ConfigError as exc:
        print(f"levmem: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LevmemError as exc:
        print(f"levmem: {args.recipe}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARTIAL
    if not args.quiet:
        for line in result.summary:
            print(line)
        for path in result.files:
            print(f"wrote {path}")
    if result.failures:
        print(f"levmem: {result.failures} sweep point(s) failed; see the status column",
              file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
