# main.py - Command-line entry point
import argparse
import logging
import sys
from typing import List, Optional

import config
from exceptions import CalculusError

# Import command groups
import commands


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output with sorted keys")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(
        prog="slopecalc",
        description="Exact slope calculus for bundles, Higgs bundles and group schemes in characteristic p",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for group in commands.ALL:
        group.register(subparsers, common)
    return parser


def configure_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format=config.LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )


def run(argv: Optional[List[str]] = None) -> int:
    """Parse, dispatch, print; returns the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging(args.verbose)
    try:
        output = args.handler(args)
    except CalculusError as e:
        print(f"❌ {type(e).__name__}: {e.detail}", file=sys.stderr)
        return e.exit_code
    print(output)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
