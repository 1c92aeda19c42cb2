# commands/sweep.py - sweep: property suites with pass/fail counts
import config
from reports import render
from sweeps import SUITES, run_suite


def run_sweep(args) -> str:
    report = run_suite(args.suite, args.cases, args.seed)
    return render(report, f"Sweep {args.suite}", args.json)


def register(subparsers, common):
    parser = subparsers.add_parser("sweep", parents=[common], help="run one property suite")
    parser.add_argument("--suite", choices=sorted(SUITES), required=True)
    parser.add_argument("--cases", type=int, default=config.SWEEP_CASES)
    parser.add_argument("--seed", type=int, default=None, help="defaults to ALGEBRA_SWEEP_SEED")
    parser.set_defaults(handler=run_sweep)
