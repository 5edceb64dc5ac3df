import json
from fractions import Fraction
from pytest import fixture
from click.testing import CliRunner
from lgorbifold.app import create_app
from lgorbifold.core.mf import build_model, koszul, make_ring
from lgorbifold.core.poly import VarSpec
from lgorbifold.commands.problems.handler import load_problem

from .data import MODELS_DIR


####################
# App Fixtures
####################


@fixture(scope="session")
def test_app():
    return create_app()


@fixture(scope="function")
def invoke(test_app):
    """Runs the CLI; stdout and stderr stay separate on the result."""
    runner = CliRunner()

    def _invoke(*args):
        return runner.invoke(test_app, ["--log-level", "ERROR", *args], catch_exceptions=False)

    return _invoke


@fixture(scope="function")
def invoke_json(invoke):
    def _invoke_json(*args):
        result = invoke(*args)
        return result, json.loads(result.stdout)

    return _invoke_json


####################
# Data Fixtures
####################


@fixture(scope="function")
def model_path():
    def _model_path(name):
        return str(MODELS_DIR / name)

    return _model_path


@fixture(scope="function")
def load_model_file():
    def _load(name):
        return load_problem(MODELS_DIR / name)

    return _load


@fixture(scope="function")
def write_problem(tmp_path):
    def _write_problem(data, name="problem.json"):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)

    return _write_problem


@fixture(scope="function")
def make_model():
    def _make_model(variables, potential, group=(), graded=True, check_isolated=True):
        specs = [VarSpec(v) if isinstance(v, str) else VarSpec(*v) for v in variables]
        ring = make_ring(specs, group)
        return build_model(ring, potential, group, graded=graded, check_isolated=check_isolated)

    return _make_model


@fixture(scope="function")
def fermat(make_model):
    """x^n with the cyclic group of order `order` (1 for the trivial group)."""

    def _fermat(n, order=None):
        group = [[f"1/{order}"]] if order and order > 1 else []
        return make_model(["x"], f"x^{n}", group)

    return _fermat


@fixture(scope="function")
def point_mf():
    """Koszul(x; x^(n-1)) on x^n, optionally with a different split."""

    def _point_mf(model, first=1, name="P"):
        n = int(model.d)
        a = "x" if first == 1 else f"x^{first}"
        rest = n - first
        b = "x" if rest == 1 else f"x^{rest}"
        return koszul([(a, b)], model, name)

    return _point_mf


@fixture(scope="function")
def random_poly():
    """Random polynomial with small coefficients, in Q(zeta) when the ring's field has one."""

    def _random_poly(ring, rng, degree=3, terms=4):
        f = ring.field
        p = ring.zero
        for _ in range(terms):
            exp = [0] * ring.nvars
            for _ in range(rng.randint(0, degree)):
                exp[rng.randrange(ring.nvars)] += 1
            coeff = f.coerce(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
            if f.conductor > 1:
                coeff = coeff + f.zeta(rng.randrange(f.conductor)) * rng.randint(-2, 2)
            p = p + ring.monomial(tuple(exp), coeff)
        return p

    return _random_poly
