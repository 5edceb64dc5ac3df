from pydantic import ValidationError
from pytest import mark, raises
from lgorbifold.core.errors import ConstructionError, EquivarianceError, UnknownNameError
from lgorbifold.commands.problems.handler import build_problem, infer_weights, load_problem
from lgorbifold.commands.problems.models import ProblemFile

from ..data import MODELS_DIR


#
# Problem files
#
@mark.parametrize("path", sorted(MODELS_DIR.glob("*.json")), ids=lambda p: p.stem)
def test_bundled_models_load(path):
    problem = load_problem(path)
    assert problem.mfs


def test_constructors_resolve_in_any_order():
    data = ProblemFile.model_validate(
        {
            "variables": [{"name": "x"}],
            "potential": "x^2",
            "group": [["1/2"]],
            "mfs": [
                {"name": "S", "directSum": ["P", "Pd"]},
                {"name": "Pd", "dual": "P"},
                {"name": "P", "koszul": [["x", "x"]]},
            ],
        }
    )
    problem = build_problem(data)
    assert problem.get_mf("S").rank == 2
    assert problem.get_mf("Pd").potential == -problem.model.w


def test_cycles_are_reported():
    data = ProblemFile.model_validate(
        {
            "variables": [{"name": "x"}],
            "potential": "x^2",
            "mfs": [{"name": "P", "dual": "Q"}, {"name": "Q", "dual": "P"}],
        }
    )
    with raises(ConstructionError):
        build_problem(data)


def test_unknown_names(load_model_file):
    problem = load_model_file("mu2_x2.json")
    with raises(UnknownNameError):
        problem.get_mf("missing")
    data = ProblemFile.model_validate(
        {"variables": [{"name": "x"}], "potential": "x^2", "mfs": [{"name": "P", "dual": "Q"}]}
    )
    with raises(UnknownNameError):
        build_problem(data)


def test_matrices_need_rho_when_the_group_is_nontrivial():
    data = ProblemFile.model_validate(
        {
            "variables": [{"name": "x"}],
            "potential": "x^2",
            "group": [["1/2"]],
            "mfs": [{"name": "M", "matrices": {"A": [["x"]], "B": [["x"]]}}],
        }
    )
    with raises(EquivarianceError):
        build_problem(data)


@mark.parametrize(
    "payload",
    [
        {"variables": [{"name": "x"}], "potential": "x^2", "extra": 1},
        {"variables": [{"name": "x", "weight": "-1"}], "potential": "x^2"},
        {"variables": [{"name": "x"}, {"name": "x"}], "potential": "x^2"},
        {"variables": [{"name": "x"}], "potential": "x^2", "group": [["1/2", "1/2"]]},
        {"variables": [{"name": "x"}], "potential": "x^2", "group": [["half"]]},
        {"variables": [{"name": "x"}], "potential": "x^2", "mfs": [{"name": "P"}]},
        {
            "variables": [{"name": "x"}],
            "potential": "x^2",
            "mfs": [{"name": "P", "koszul": [["x", "x"]], "dual": "P"}],
        },
        {
            "variables": [{"name": "x"}],
            "potential": "x^2",
            "mfs": [{"name": "P", "koszul": [["x", "x"]]}, {"name": "P", "dual": "P"}],
        },
    ],
)
def test_schema_violations(payload):
    with raises(ValidationError):
        ProblemFile.model_validate(payload)


def test_weights_are_inferred_from_entries(load_model_file):
    problem = load_model_file("mu2_x2_matrices.json")
    M = problem.get_mf("M")
    assert M.weights_even == (0,)
    assert M.weights_odd == (-1,)
    assert infer_weights(M.A, M.B, problem.model) == ([0], [-1])


#
# validate
#
def test_validate_reports_every_factorization(invoke_json, model_path):
    result, body = invoke_json("validate", model_path("mu3_x3.json"))
    assert result.exit_code == 0
    assert body["valid"] is True
    assert body["model"]["groupOrder"] == 3
    assert body["model"]["conductor"] == 3
    assert body["model"]["milnorNumber"] == 2
    assert [m["name"] for m in body["mfs"]] == ["P", "P1", "Q"]
    first = body["mfs"][0]
    assert first["kind"] == "koszul"
    assert first["weightsOdd"] == ["-2"]
    assert first["equivariance"] == [{"generator": ["1/3"], "order": 3, "equivariant": True}]
    assert first["homotopyIdentity"] is True


def test_validate_lists_sectors(invoke_json, model_path):
    _, body = invoke_json("validate", model_path("fermat_cubic_mu3.json"))
    sectors = body["model"]["sectors"]
    assert len(sectors) == 3
    assert sectors[0]["nG"] == 2 and sectors[0]["milnorNumber"] == 4
    assert all(s["nG"] == 0 for s in sectors[1:])
