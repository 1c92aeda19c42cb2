# documents.py - Reading, canonical emission and built-in fixture documents
"""
Data layer of the CLI: documents come from files or standard input, are
validated by the pydantic schemas and converted to domain objects.
"""
import json
import logging
import sys
from typing import Any, Dict, Optional

from pydantic import TypeAdapter, ValidationError

import schemas
from engine import ListOracle, moret_bailly_family, moret_bailly_state
from exact_algebra import FieldSpec
from exceptions import DocumentError
from groupschemes import DieudonneModule
from models import DocumentKind, RepeatPolicy
from reports import render_json

logger = logging.getLogger(__name__)

_adapter = TypeAdapter(schemas.Document)


# ---------------------- PARSING ----------------------

def _location(loc) -> str:
    return ".".join(str(part) for part in loc)


def parse_document(text: str, expected: Optional[set] = None):
    """JSON text -> schema document; every failure becomes a DocumentError"""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"line {e.lineno} column {e.colno}: {e.msg}")
    if not isinstance(raw, dict):
        raise DocumentError("document must be a JSON object")
    try:
        doc = _adapter.validate_python(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise DocumentError(first["msg"], _location(first["loc"]) or None)
    if expected is not None and doc.kind not in expected:
        raise DocumentError(f"expected one of {sorted(expected)}, got {doc.kind!r}", "kind")
    logger.debug("parsed %s document", doc.kind)
    return doc


def read_document(path: str, expected: Optional[set] = None):
    """Read from a file path, or from standard input when path is '-'"""
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as e:
            raise DocumentError(f"cannot read {path}: {e.strerror}")
    return parse_document(text, expected)


# ---------------------- EMISSION ----------------------

def canonicalize(doc):
    """Round trip through the domain objects: reduced coefficients, sorted bundles, explicit defaults"""
    if doc.kind == DocumentKind.reduction.value:
        state, oracle = to_domain(doc)
        return schemas.ReductionDocument.from_domain(state, oracle)
    return type(doc).from_domain(to_domain(doc))


def emit_document(doc) -> str:
    return render_json(canonicalize(doc))


# ---------------------- FIXTURES ----------------------

def moret_bailly_documents(p: int) -> Dict[str, Any]:
    family = moret_bailly_family(p)
    state = moret_bailly_state(p)
    return {
        "family": schemas.FamilyDocument.from_domain(family),
        "graded_higgs": schemas.GradedHiggsDocument.from_domain(family.graded),
        "reduction": schemas.ReductionDocument.from_domain(state, ListOracle([], RepeatPolicy.none)),
    }


def dieudonne_fixtures(p: int = 2) -> Dict[str, schemas.DieudonneDocument]:
    field = FieldSpec(p)
    return {
        "alpha_p": schemas.DieudonneDocument.from_domain(DieudonneModule.alpha_p(field)),
        "mu_p": schemas.DieudonneDocument.from_domain(DieudonneModule.mu_p(field)),
        "z_p": schemas.DieudonneDocument.from_domain(DieudonneModule.constant_z_p(field)),
    }


def to_domain(doc):
    """Domain objects of a parsed document; shape errors surface as DocumentError"""
    try:
        return doc.to_domain()
    except ValueError as e:
        raise DocumentError(str(e), doc.kind)
