# commands/higgs_check.py - higgs-check: semistability, W2 rule and Arakelov chain
from higgs import Destabilizer, GradedHiggs, arakelov_pipeline, is_nilpotent, semistability_verdict, w2_rule
from documents import read_document, to_domain
from models import DocumentKind, HiggsReport, WitnessReport
from reports import render
from schemas import FormDoc


def witness_report(witness: Destabilizer) -> WitnessReport:
    gens = witness.subsheaf.generators
    columns = [
        [FormDoc.from_domain(gens.entries[i][j]).model_dump() for i in range(gens.nrows)]
        for j in range(gens.ncols)
    ]
    return WitnessReport(twists=list(witness.twists), slope=str(witness.slope), generators=columns)


def higgs_report(H, genus: int = 0) -> HiggsReport:
    graded = isinstance(H, GradedHiggs)
    higgs = H.higgs if graded else H
    check = semistability_verdict(H)
    rule = arakelov = None
    if graded:
        rule, _ = w2_rule(H)
        arakelov = arakelov_pipeline(H, genus)
    return HiggsReport(
        twists=list(higgs.twists),
        slope=str(higgs.slope),
        nilpotent=is_nilpotent(H),
        verdict=check.verdict,
        complete=check.complete,
        witness=None if check.witness is None else witness_report(check.witness),
        w2_rule=rule,
        arakelov=arakelov,
    )


def run_higgs_check(args) -> str:
    doc = read_document(args.document, {DocumentKind.higgs.value, DocumentKind.graded_higgs.value})
    return render(higgs_report(to_domain(doc), args.genus), "Higgs check", args.json)


def register(subparsers, common):
    parser = subparsers.add_parser("higgs-check", parents=[common], help="semistability verdict of a Higgs bundle")
    parser.add_argument("document", help="higgs or graded_higgs document, or - for stdin")
    parser.add_argument("--genus", type=int, default=0, help="base genus used by the Arakelov chain")
    parser.set_defaults(handler=run_higgs_check)
