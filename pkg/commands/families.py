# commands/families.py - w2-report and the moret-bailly regression
from commands.higgs_check import witness_report
from documents import read_document, to_domain
from engine import (
    ListOracle,
    moret_bailly_family,
    moret_bailly_lie_estimate,
    moret_bailly_lie_map,
    moret_bailly_state,
    reduction_run,
    w2_obstruction_report,
)
from bundles import positivity_verdict, slope
from exceptions import InternalInvariantViolation
from groupschemes import moret_bailly_H
from higgs import arakelov_pipeline, w2_rule
from models import DocumentKind, MoretBaillyReport, RepeatPolicy, W2Rule
from reports import render


def moret_bailly_report(p: int) -> MoretBaillyReport:
    family = moret_bailly_family(p)
    rule, witness = w2_rule(family.graded)
    if rule != W2Rule.obstruction_found:
        raise InternalInvariantViolation(f"no Higgs destabilizer found for the p={p} fixture")
    subgroup = moret_bailly_H(p)
    w2 = w2_obstruction_report(family)
    return MoretBaillyReport(
        prime=p,
        lie=list(moret_bailly_lie_map(p).target_twists),
        hodge=list(family.hodge.twists),
        hodge_degree=family.hodge.degree,
        lie_slope=str(slope(family.lie)),
        positivity=positivity_verdict(family.hodge),
        witness=witness_report(witness),
        arakelov=arakelov_pipeline(family.graded, family.genus),
        reduction=reduction_run(moret_bailly_state(p), ListOracle([], RepeatPolicy.none)),
        subgroup_twists=list(subgroup.twists),
        subgroup_constant=subgroup.is_constant,
        lie_estimate=moret_bailly_lie_estimate(p),
        w2=w2,
        verdict=w2.verdict,
    )


def run_moret_bailly(args) -> str:
    return render(moret_bailly_report(args.prime), f"Moret-Bailly family, p = {args.prime}", args.json)


def run_w2_report(args) -> str:
    doc = read_document(args.document, {DocumentKind.family.value})
    return render(w2_obstruction_report(to_domain(doc)), "W2 obstruction report", args.json)


def register(subparsers, common):
    parser = subparsers.add_parser("moret-bailly", parents=[common], help="full report on the Moret-Bailly family")
    parser.add_argument("--prime", "-p", type=int, required=True)
    parser.set_defaults(handler=run_moret_bailly)

    parser = subparsers.add_parser("w2-report", parents=[common], help="W2 obstruction report of a family descriptor")
    parser.add_argument("document", help="family document, or - for stdin")
    parser.set_defaults(handler=run_w2_report)
