# tests/test_documents.py
import json

import pytest

import schemas
from bundles import AbstractBundle, SplitBundle
from documents import (
    canonicalize,
    dieudonne_fixtures,
    emit_document,
    moret_bailly_documents,
    parse_document,
    read_document,
    to_domain,
)
from engine import ListOracle, ReductionState
from exceptions import DocumentError
from models import RepeatPolicy
from reports import render_json


def test_bundle_document_with_twists():
    doc = parse_document('{"kind": "bundle", "twists": [-5, 1]}')
    assert isinstance(doc, schemas.BundleDocument)
    assert to_domain(doc) == SplitBundle.of(1, -5)


def test_bundle_document_with_numerical_data():
    doc = parse_document(json.dumps({
        "kind": "bundle", "rank": 2, "degree": 3, "genus": 1, "prime": 3,
        "hn": [{"slope": "2", "rank": 1}, {"slope": "1", "rank": 1}],
    }))
    B = to_domain(doc)
    assert isinstance(B, AbstractBundle)
    assert (B.rank, B.degree, B.genus) == (2, 3, 1)
    assert not B.assumed_semistable


def test_malformed_json_reports_line_and_column():
    with pytest.raises(DocumentError) as info:
        parse_document('{"kind": "bundle",\n "twists": [1,, 2]}')
    assert "line 2" in info.value.detail


def test_schema_errors_name_the_field():
    with pytest.raises(DocumentError) as info:
        parse_document('{"kind": "bundle", "twists": ["x"]}')
    assert "twists" in info.value.detail
    with pytest.raises(DocumentError):
        parse_document('{"kind": "bundle"}')
    with pytest.raises(DocumentError):
        parse_document('{"twists": [1]}')
    with pytest.raises(DocumentError):
        parse_document('[1, 2]')


def test_wrong_kind_is_refused():
    with pytest.raises(DocumentError) as info:
        parse_document('{"kind": "bundle", "twists": [0]}', {"family"})
    assert info.value.context["field"] == "kind"


def test_form_length_must_match_degree():
    with pytest.raises(DocumentError):
        parse_document(json.dumps({
            "kind": "graded_matrix", "field": {"p": 5}, "source": [0], "target": [1],
            "entries": [[{"degree": 1, "coeffs": [1]}]],
        }))


def test_square_check_on_dieudonne_documents():
    doc = parse_document('{"kind": "dieudonne", "field": {"p": 2}, "F": [[0, 1]], "V": [[0]]}')
    with pytest.raises(DocumentError):
        to_domain(doc)


def test_missing_file_is_a_document_error(tmp_path):
    with pytest.raises(DocumentError):
        read_document(str(tmp_path / "absent.json"))


def test_moret_bailly_fixtures_survive_emission():
    docs = moret_bailly_documents(5)
    for name, doc in docs.items():
        text = emit_document(doc)
        again = parse_document(text)
        assert emit_document(again) == text, name
    family = to_domain(parse_document(emit_document(docs["family"])))
    assert family.hodge == SplitBundle.of(5, -1)
    assert family.graded is not None


def test_reduction_document_carries_its_oracle():
    state, oracle = to_domain(moret_bailly_documents(3)["reduction"])
    assert isinstance(state, ReductionState)
    assert isinstance(oracle, ListOracle)
    assert oracle.policy == RepeatPolicy.none
    assert state.lie_phi.target_twists == (-3, 1)


def test_canonical_form_reduces_coefficients():
    doc = parse_document(json.dumps({
        "kind": "graded_matrix", "field": {"p": 5}, "source": [0], "target": [1],
        "entries": [[{"degree": 1, "coeffs": [6, 10]}]],
    }))
    canonical = canonicalize(doc)
    assert canonical.entries[0][0].coeffs == [1, 0]


def test_emission_uses_the_report_json_layout():
    doc = parse_document('{"kind": "bundle", "twists": [-5, 1]}')
    text = emit_document(doc)
    assert text == render_json(canonicalize(doc))
    assert text.splitlines()[1].startswith("  \"")
    assert json.loads(text)["twists"] == [1, -5]


def test_dieudonne_fixtures():
    fixtures = dieudonne_fixtures(2)
    assert set(fixtures) == {"alpha_p", "mu_p", "z_p"}
    assert fixtures["mu_p"].V == [[1]]
