from pytest import mark
from lgorbifold.core.mf import koszul
from lgorbifold.commands.hrr.handler import (
    hrr_sectors,
    invariant_classes,
    verify_cardy,
    verify_diagonal_decomposition,
    verify_hrr,
)

from ..data import CHI_CASES


#
# Hirzebruch-Riemann-Roch
#
@mark.parametrize("name, p, q, chi", CHI_CASES)
def test_hrr_matches_euler_characteristic(load_model_file, name, p, q, chi):
    problem = load_model_file(name)
    report = verify_hrr(problem.get_mf(p), problem.get_mf(q))
    assert report.verdict == "equal"
    assert report.integral
    assert report.chi_ext == chi
    assert report.chi_hrr == str(chi)


def test_narrow_contributions_are_irrational_but_sum_to_one(load_model_file):
    problem = load_model_file("mu3_x3.json")
    P = problem.get_mf("P")
    rows = hrr_sectors(P, P)
    assert len(rows) == 3
    untwisted, *narrow = [value for *_, value in rows]
    assert untwisted == 0
    assert all(not value.is_rational() for value in narrow)
    assert narrow[0] + narrow[1] == 1


def test_point_on_mu2(load_model_file):
    problem = load_model_file("mu2_x2.json")
    P = problem.get_mf("P")
    report = verify_hrr(P, P)
    untwisted, narrow = report.sectors
    assert untwisted.contribution == "0"
    assert narrow.denominator == "2"
    assert narrow.ch_q_top == "2"
    assert narrow.contribution == "1"


@mark.slow
def test_hrr_on_the_fermat_cubic_surface(load_model_file):
    problem = load_model_file("fermat_cubic_mu3.json")
    for p, q in [("P", "P"), ("P", "L"), ("L", "L1")]:
        report = verify_hrr(problem.get_mf(p), problem.get_mf(q))
        assert report.verdict == "equal", (p, q)


def test_hrr_without_grading_skips_ext(load_model_file):
    problem = load_model_file("ungraded_x2_y3.json")
    P = problem.get_mf("P")
    report = verify_hrr(P, P)
    assert report.verdict == "ext-skipped"
    assert report.chi_ext is None
    assert report.integral


def test_hrr_command(invoke_json, model_path):
    result, body = invoke_json("hrr", model_path("mu2_x2.json"), "--p", "P", "--q", "P_twisted")
    assert result.exit_code == 0
    assert body["verdict"] == "equal"
    assert body["chiHrr"] == "-1"
    assert body["chiExt"] == -1
    assert [s["nG"] for s in body["sectors"]] == [1, 0]


#
# Cardy condition
#
@mark.parametrize(
    "name, p, q",
    [
        ("mu2_x2.json", "P", "P"),
        ("mu2_x2.json", "P", "P_twisted"),
        ("trivial_x2.json", "P", "P"),
        ("trivial_x3.json", "P", "Q"),
        ("mu3_x3.json", "P", "Q"),
    ],
)
def test_cardy_condition(load_model_file, name, p, q):
    problem = load_model_file(name)
    report = verify_cardy(problem.get_mf(p), problem.get_mf(q))
    assert report.pairs
    assert report.verdict == "equal"


def test_cardy_pairs_on_x2(load_model_file):
    problem = load_model_file("trivial_x2.json")
    P = problem.get_mf("P")
    report = verify_cardy(P, P)
    traces = {(pair.a, pair.b): pair.trace for pair in report.pairs}
    assert traces == {
        ("even[0]#0", "even[0]#0"): "0",
        ("even[0]#0", "odd[0]#0"): "0",
        ("odd[0]#0", "even[0]#0"): "0",
        ("odd[0]#0", "odd[0]#0"): "-2",
    }
    assert all(pair.trace == pair.pairing for pair in report.pairs)


def test_cardy_command(invoke_json, model_path):
    result, body = invoke_json("cardy", model_path("mu2_x2.json"), "--p", "P", "--q", "P")
    assert result.exit_code == 0
    assert body["pairs"] == [
        {"a": "even[0]#0", "b": "even[0]#0", "trace": "1", "pairing": "1", "equal": True}
    ]


#
# Decomposition of the diagonal
#
def test_invariant_classes_of_mu2(fermat):
    classes = invariant_classes(fermat(2, order=2))
    # 1 dx is odd under x -> -x
    assert [c.sector.n_g for c in classes] == [0]


@mark.parametrize(
    "name, pairing, kernel",
    [
        ("trivial_x2.json", [["-1/2"]], [["-2"]]),
        ("trivial_x3.json", [["0", "-1/3"], ["-1/3", "0"]], [["0", "-3"], ["-3", "0"]]),
        ("mu2_x2.json", [["1/4"]], [["4"]]),
    ],
)
def test_diagonal_decomposition(load_model_file, name, pairing, kernel):
    report = verify_diagonal_decomposition(load_model_file(name).model)
    assert report.verdict == "equal"
    assert report.pairing == pairing
    assert report.kernel == kernel


@mark.parametrize("name", ["mu3_x3.json", "mu4_x4.json", "trivial_x3.json"])
def test_diagonal_decomposition_holds(load_model_file, name):
    report = verify_diagonal_decomposition(load_model_file(name).model)
    assert report.verdict == "equal"
    assert all(pair.lhs == pair.rhs for pair in report.pairs)


def test_diagonal_command(invoke_json, model_path):
    result, body = invoke_json("diagonal", model_path("trivial_x2.json"))
    assert result.exit_code == 0
    assert body["verdict"] == "equal"
    assert body["reason"] is None
    assert body["pairs"] == [
        {"gamma": body["classes"][0], "gammaPrime": body["classes"][0], "lhs": "-1/2", "rhs": "-1/2"}
    ]


@mark.slow
def test_hrr_on_the_cubic_surface_without_group(make_model):
    model = make_model(["x", "y"], "x^3 + y^3")
    P = koszul([("x", "x^2"), ("y", "y^2")], model, "P")
    L = koszul([("x + y", "x^2 - x*y + y^2")], model, "L")
    for p, q in [(P, P), (P, L), (L, L)]:
        report = verify_hrr(p, q)
        assert report.verdict == "equal", (p.name, q.name)
