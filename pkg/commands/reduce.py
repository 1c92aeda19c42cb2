# commands/reduce.py - reduce: run the isogeny reduction loop on a document
import config
from documents import read_document, to_domain
from engine import reduction_run
from models import DocumentKind
from reports import render


def run_reduce(args) -> str:
    doc = read_document(args.document, {DocumentKind.reduction.value})
    state, oracle = to_domain(doc)
    return render(reduction_run(state, oracle, args.max_steps), "Reduction", args.json)


def register(subparsers, common):
    parser = subparsers.add_parser("reduce", parents=[common], help="reduction loop with an inline oracle")
    parser.add_argument("document", help="reduction document, or - for stdin")
    parser.add_argument("--max-steps", type=int, default=config.DEFAULT_MAX_STEPS)
    parser.set_defaults(handler=run_reduce)
