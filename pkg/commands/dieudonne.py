# commands/dieudonne.py - dieudonne and lie-bundle: group-scheme side documents
from documents import read_document, to_domain
from exceptions import NotConstant, NotLocalLocal
from exact_algebra import matrix_to_ints
from groupschemes import DieudonneModule, RestrictedLieBundle, alpha_filtration, constancy_descend, local_local_test
from models import DieudonneReport, DocumentKind, LieBundleReport
from reports import render


def dieudonne_report(M: DieudonneModule) -> DieudonneReport:
    local = local_local_test(M)
    filtration = failure = None
    try:
        filtration = alpha_filtration(M)
    except NotLocalLocal as e:
        failure = e.detail
    return DieudonneReport(
        p=M.field.p,
        m=M.field.m,
        dim=M.dim,
        local_local=local,
        filtration=filtration,
        failure=failure,
    )


def lie_bundle_report(L: RestrictedLieBundle) -> LieBundleReport:
    try:
        datum = constancy_descend(L)
    except NotConstant as e:
        return LieBundleReport(twists=list(L.twists), constant=False, witness=e.witness)
    return LieBundleReport(twists=list(L.twists), constant=True, constant_pmat=matrix_to_ints(datum.pmat))


def run_dieudonne(args) -> str:
    doc = read_document(args.document, {DocumentKind.dieudonne.value})
    return render(dieudonne_report(to_domain(doc)), "Dieudonne module", args.json)


def run_lie_bundle(args) -> str:
    doc = read_document(args.document, {DocumentKind.lie_bundle.value})
    return render(lie_bundle_report(to_domain(doc)), "Restricted Lie bundle", args.json)


def register(subparsers, common):
    parser = subparsers.add_parser("dieudonne", parents=[common], help="local-local test and alpha_p flag")
    parser.add_argument("document", help="dieudonne document, or - for stdin")
    parser.set_defaults(handler=run_dieudonne)

    parser = subparsers.add_parser("lie-bundle", parents=[common], help="constancy of a restricted Lie bundle")
    parser.add_argument("document", help="lie_bundle document, or - for stdin")
    parser.set_defaults(handler=run_lie_bundle)
