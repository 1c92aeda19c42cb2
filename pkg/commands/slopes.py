# commands/slopes.py - slope and hn: numerical invariants of a bundle
from typing import Union

from bundles import (
    AbstractBundle,
    SplitBundle,
    dual_bundle,
    hn_filtration,
    maximal_destabilizing,
    mu_bar_bounds,
    mu_bar_max_bounds,
    mu_max,
    mu_min,
    positivity_verdict,
    slope,
)
from documents import read_document, to_domain
from models import BundleReport, DocumentKind, HNBlockReport
from reports import render


def bundle_report(B: Union[SplitBundle, AbstractBundle]) -> BundleReport:
    lo, hi = mu_bar_bounds(B)
    max_lo, max_hi = mu_bar_max_bounds(B)
    split = isinstance(B, SplitBundle)
    top = maximal_destabilizing(B) if split else None
    return BundleReport(
        twists=list(B.twists) if split else None,
        rank=B.rank,
        degree=B.degree,
        genus=0 if split else B.genus,
        slope=str(slope(B)),
        hn=[HNBlockReport(slope=str(s), rank=r) for s, r in hn_filtration(B).pairs()],
        mu_max=str(mu_max(B)),
        mu_min=str(mu_min(B)),
        mu_bar_min=[str(lo), str(hi)],
        mu_bar_max=[str(max_lo), str(max_hi)],
        positivity=positivity_verdict(B),
        dual_positivity=positivity_verdict(dual_bundle(B)),
        maximal_destabilizing=None if top is None else list(top.twists),
        assumed_semistable=not split and B.assumed_semistable,
    )


def run_slope(args) -> str:
    doc = read_document(args.document, {DocumentKind.bundle.value})
    return render(bundle_report(to_domain(doc)), "Bundle", args.json)


def register(subparsers, common):
    for name, text in (("slope", "slope, HN profile and positivity of a bundle"), ("hn", "alias of slope")):
        parser = subparsers.add_parser(name, parents=[common], help=text)
        parser.add_argument("document", help="bundle document, or - for stdin")
        parser.set_defaults(handler=run_slope)
