# commands/emit.py - emit: canonical form of a document
import config
from documents import emit_document, moret_bailly_documents, read_document


def run_emit(args) -> str:
    if args.fixture is not None:
        return emit_document(moret_bailly_documents(args.prime)[args.fixture])
    if args.document is None:
        args.document = "-"
    return emit_document(read_document(args.document))


def register(subparsers, common):
    parser = subparsers.add_parser("emit", parents=[common], help="parse a document and print its canonical form")
    parser.add_argument("document", nargs="?", help="any document, or - for stdin")
    parser.add_argument("--fixture", choices=["family", "graded_higgs", "reduction"], help="emit a Moret-Bailly fixture instead")
    parser.add_argument("--prime", "-p", type=int, default=config.DEFAULT_PRIME)
    parser.set_defaults(handler=run_emit)
