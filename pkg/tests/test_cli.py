import json

import pytest

from pfaffian.catalog import catalog, get_example, lookup
from pfaffian.cli import EXIT_INDETERMINATE, EXIT_INVALID, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == EXIT_OK, err
    return json.loads(out)


def test_analyze_json_document(capsys):
    doc = run_json(capsys, "analyze", "--chart", "x,y,z", "--form", "dz - y*dx")
    assert doc["schema"] == "pfaffian-report/1"
    assert doc["command"] == "analyze"
    assert doc["config"] == {"seed": 0, "probes": 32, "tol": 1e-9, "domain": {}}
    assert doc["result"]["class"] == 3


def test_text_output(capsys):
    code, out, _ = run(capsys, "analyze", "--chart", "x,y", "--form", "y*dx")
    assert code == EXIT_OK
    assert out.startswith("pfaffian analyze")
    assert "IntegratingFactor" in out


def test_output_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "frobenius", "--chart", "x,y,z", "--form", "dz - y*dx",
                       "--format", "json", "--output", str(path))
    assert code == EXIT_OK and out == ""
    assert json.loads(path.read_text())["result"]["integrable"] is False


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "analyze", "--chart", "x,y", "--form", "x +")
    assert code == EXIT_INVALID
    assert "column" in err and "^" in err


def test_invalid_options(capsys):
    assert run(capsys, "analyze", "--chart", "x", "--form", "dx", "--probes", "0")[0] == EXIT_INVALID
    assert run(capsys, "analyze", "--chart", "x", "--form", "dx", "--domain", "x=2:1")[0] == EXIT_INVALID
    assert run(capsys, "analyze", "--chart", "x,y", "--form", "0")[0] == EXIT_INVALID
    assert run(capsys, "nonsense")[0] == EXIT_INVALID


def test_indeterminate_exit_code(capsys):
    code, _, err = run(capsys, "analyze", "--chart", "x,y", "--form", "ln(-x^2 - 1)*dx + dy")
    assert code == EXIT_INDETERMINATE
    assert "indeterminate" in err


def test_seed_reproducible(capsys):
    argv = ("analyze", "--chart", "x,y", "--form", "(sin(2*x) - 2*sin(x)*cos(x) + 1)*dx", "--seed", "7")
    assert run_json(capsys, *argv) == run_json(capsys, *argv)


def test_decompose_verify(capsys):
    doc = run_json(capsys, "decompose-verify", "--chart", "x,y,z", "--form", "dz - y*dx",
                   "--kind", "contact", "--fn", "lambda=z", "--fn", "mu=-y", "--fn", "nu=x")
    assert doc["result"]["valid"] is True


def test_bracket_and_mech(capsys):
    doc = run_json(capsys, "bracket", "--f", "x", "--g", "p")
    assert "1" in json.dumps(doc["result"])
    doc = run_json(capsys, "mech", "--hamiltonian", "(p^2 + x^2)/2")
    assert doc["result"]["equations"] == {"x": "p", "p": "-x"}


def test_domain_override_echoed(capsys):
    doc = run_json(capsys, "drag", "--kind", "linear", "--domain", "alpha=1:3")
    assert doc["config"]["domain"] == {"alpha": [1.0, 3.0]}


def test_examples_listing(capsys):
    doc = run_json(capsys, "examples", "--list")
    assert [e["name"] for e in doc["result"]["examples"]] == [e.name for e in catalog()]


def test_example_by_name(capsys):
    doc = run_json(capsys, "examples", "--name", "rigid-rotation")
    assert doc["result"]["matches_stored"] is True
    code, _, err = run(capsys, "examples", "--name", "rigid-rotatoin")
    assert code == EXIT_INVALID and "rigid-rotation" in err


@pytest.mark.parametrize("name", [e.name for e in catalog()])
def test_catalog_entry_reproduces(name, capsys):
    ex = get_example(name)
    doc = run_json(capsys, *ex.argv)
    for path, want in ex.expected.items():
        assert lookup(doc["result"], path) == want
