# tests/conftest.py - Shared fixtures
import json

import pytest

from exact_algebra import FieldSpec, Form
import main


@pytest.fixture
def F5():
    return FieldSpec(5)


@pytest.fixture
def F2():
    return FieldSpec(2)


@pytest.fixture
def forms(F5):
    """Shorthands U, V, constants over F_5"""
    class _Forms:
        U = Form.U(F5)
        V = Form.V(F5)
        zero = Form.zero(F5)
        one = Form.constant(F5, 1)

        @staticmethod
        def c(value: int) -> Form:
            return Form.constant(F5, value)

    return _Forms


@pytest.fixture
def write_doc(tmp_path):
    """Write a dict as a JSON document and return its path"""
    def _write(data, name="doc.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)
    return _write


@pytest.fixture
def cli(capsys):
    """Run the CLI in-process; returns (exit code, stdout, stderr)"""
    def _run(*argv):
        code = main.run(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err
    return _run
