import json
import click
from click.testing import CliRunner
from pytest import mark
from lgorbifold.commands.ext.models import ChiReport
from lgorbifold.commands.output import EXIT_MISMATCH, emit, render_text

from ..data import MODELS_DIR


def test_text_format(invoke, model_path):
    result = invoke("--format", "text", "validate", model_path("mu2_x2.json"))
    assert result.exit_code == 0
    assert "valid: yes" in result.stdout.splitlines()


def test_render_text():
    report = ChiReport(p="P", q="Q", ext_even=1, ext_odd=0, chi=1)
    assert render_text(report) == "p: P\nq: Q\nextEven: 1\nextOdd: 0\nchi: 1"


def test_missing_file(invoke_json, tmp_path):
    result, body = invoke_json("validate", str(tmp_path / "missing.json"))
    assert result.exit_code == 1
    assert body["error"] == "FileNotFoundError"


def test_schema_errors_are_reported(invoke_json, write_problem):
    path = write_problem({"variables": [{"name": "x"}], "potential": "x^2", "group": [["1/2", "0"]]})
    result, body = invoke_json("validate", path)
    assert result.exit_code == 1
    assert body["error"] == "ValidationError"
    assert body["messages"]


def test_malformed_json(invoke_json, write_problem):
    result, body = invoke_json("validate", write_problem("{not json"))
    assert result.exit_code == 1
    assert body["error"] == "ValidationError"


def test_unknown_factorization(invoke_json, model_path):
    result, body = invoke_json("chi", model_path("mu2_x2.json"), "--p", "P", "--q", "R")
    assert result.exit_code == 1
    assert body["error"] == "UnknownNameError"
    assert "'R'" in body["message"]


def test_parse_errors_carry_positions(invoke_json, write_problem):
    path = write_problem({"variables": [{"name": "x"}], "potential": "x + $"})
    result, body = invoke_json("validate", path)
    assert result.exit_code == 1
    assert body["error"] == "ParseError"
    assert body["position"] == 4
    assert body["text"] == "x + $"


def test_text_errors_go_to_stderr(invoke, write_problem):
    path = write_problem({"variables": [{"name": "x"}], "potential": "x + $"})
    result = invoke("--format", "text", "validate", path)
    assert result.exit_code == 1
    assert result.stdout == ""
    assert result.stderr.startswith("error [ParseError] poly/polynomial grammar:")


def test_model_errors(invoke_json, write_problem):
    path = write_problem({"variables": [{"name": "x"}, {"name": "y"}], "potential": "x^2*y"})
    result, body = invoke_json("validate", path)
    assert result.exit_code == 1
    assert body["error"] == "ModelError"
    assert body["invariant"]


def test_mismatch_exit_code():
    @click.command()
    @click.pass_context
    def failing(ctx):
        emit(ctx, ChiReport(p="P", q="Q", ext_even=0, ext_odd=0, chi=0), mismatch=True)

    result = CliRunner().invoke(failing)
    assert result.exit_code == EXIT_MISMATCH
    assert '"chi": 0' in result.stdout


def test_help_names_the_error_streams(invoke):
    result = invoke("--help")
    assert result.exit_code == 0
    text = " ".join(result.stdout.split())
    assert "Input errors replace the report on stdout" in text
    assert "one line to stderr with text" in text


def test_json_errors_replace_the_report(invoke, write_problem):
    path = write_problem({"variables": [{"name": "x"}], "potential": "x + $"})
    result = invoke("validate", path)
    assert result.exit_code == 1
    assert json.loads(result.stdout)["error"] == "ParseError"
    assert result.stderr == ""


@mark.parametrize("path", sorted(MODELS_DIR.glob("*.json")), ids=lambda p: p.stem)
def test_reports_are_deterministic(invoke, path):
    first_mf = json.loads(path.read_text())["mfs"][0]["name"]
    for args in (["validate"], ["milnor"], ["chern", "--mf", first_mf]):
        first = invoke(*args[:1], str(path), *args[1:])
        second = invoke(*args[:1], str(path), *args[1:])
        assert first.exit_code == 0, (args, first.stdout)
        assert first.stdout_bytes == second.stdout_bytes
        assert isinstance(json.loads(first.stdout), dict)
