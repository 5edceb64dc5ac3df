from pytest import mark, raises
from lgorbifold.core.errors import ConstructionError, GradingRequiredError
from lgorbifold.commands.ext.handler import (
    HomComplex,
    cardy_trace,
    chi_report,
    euler_characteristic,
    ext_basis,
    ext_report,
    identity_class,
)

from ..data import CHI_CASES


@mark.parametrize("name, p, q, chi", CHI_CASES)
def test_euler_characteristic(load_model_file, name, p, q, chi):
    problem = load_model_file(name)
    report = chi_report(problem.get_mf(p), problem.get_mf(q))
    assert report.chi == chi
    assert report.ext_even - report.ext_odd == chi


def test_ext_of_a_point_on_x2(load_model_file):
    problem = load_model_file("trivial_x2.json")
    P = problem.get_mf("P")
    basis = ext_basis(P, P)
    assert [str(t) for t in basis.window] == ["0", "2"]
    assert [(c.degree, c.parity) for c in basis.classes] == [(0, 0), (0, 1)]
    assert all(c.morphism.is_closed() for c in basis.classes)
    assert basis.euler_characteristic() == 0


def test_ext_keeps_only_invariant_classes(load_model_file):
    problem = load_model_file("mu2_x2.json")
    P = problem.get_mf("P")
    basis = ext_basis(P, P)
    assert len(basis.of_parity(0)) == 1
    assert basis.of_parity(1) == []
    twisted = ext_basis(P, problem.get_mf("P_twisted"))
    assert twisted.of_parity(0) == []
    assert len(twisted.of_parity(1)) == 1


def test_identity_acts_as_identity_in_cardy_traces(load_model_file):
    problem = load_model_file("trivial_x2.json")
    P = problem.get_mf("P")
    basis = ext_basis(P, P)
    e = identity_class(P)
    # even minus odd dimension
    assert cardy_trace(e, e, basis) == 0


def test_ext_report(load_model_file):
    problem = load_model_file("mu3_x3.json")
    report = ext_report(problem.get_mf("P"), problem.get_mf("P"))
    assert report.chi == 1
    (piece,) = report.pieces
    assert piece.degree == "0" and piece.parity == 0 and piece.dimension == 1
    ((top, bottom),) = piece.representatives
    assert top[1] == bottom[0] == "0"
    assert top[0] == bottom[1] != "0"


def test_ext_needs_a_grading(load_model_file):
    problem = load_model_file("ungraded_x2_y3.json")
    P = problem.get_mf("P")
    with raises(GradingRequiredError):
        euler_characteristic(P, P)


def test_ext_needs_a_common_model(fermat, point_mf):
    P = point_mf(fermat(2))
    Q = point_mf(fermat(3))
    with raises(ConstructionError):
        HomComplex(P, Q)


def test_chi_command(invoke_json, model_path):
    result, body = invoke_json("chi", model_path("mu2_x2.json"), "--p", "P", "--q", "P_twisted")
    assert result.exit_code == 0
    assert body == {"p": "P", "q": "P_twisted", "extEven": 0, "extOdd": 1, "chi": -1}


def test_ext_command(invoke_json, model_path):
    result, body = invoke_json("ext", model_path("trivial_x2.json"), "--p", "P", "--q", "P")
    assert result.exit_code == 0
    assert body["window"] == ["0", "2"]
    assert [(p["degree"], p["parity"], p["dimension"]) for p in body["pieces"]] == [
        ("0", 0, 1),
        ("0", 1, 1),
    ]


def test_ext_command_without_grading(invoke_json, model_path):
    result, body = invoke_json("chi", model_path("ungraded_x2_y3.json"), "--p", "P", "--q", "P")
    assert result.exit_code == 1
    assert body["error"] == "GradingRequiredError"
