import random
from pytest import fixture, mark, raises
from lgorbifold.core.errors import ParseError
from lgorbifold.core.parser import parse, tokenize
from lgorbifold.core.poly import PolyRing, VarSpec
from lgorbifold.core.scalars import CyclotomicField

from ..data import RANDOM_SEEDS


@fixture
def ring():
    return PolyRing([VarSpec("x"), VarSpec("y"), VarSpec("z")], CyclotomicField.of(6))


def test_tokenize_positions():
    tokens = tokenize("x^2 + 3*y")
    assert [t.text for t in tokens] == ["x", "^", "2", "+", "3", "*", "y", ""]
    assert tokens[3].position == 4
    assert tokens[-1].kind == "eof"


@mark.parametrize(
    "text, expected",
    [
        ("x^2 - 2*x*y + y^2", "(x - y)^2"),
        ("-x + -y", "-(x + y)"),
        ("x*y/2", "(1/2)*x*y"),
        ("(x + 1)^0", "1"),
        ("x^3 + y^3", "(x + y)*(x^2 - x*y + y^2)"),
    ],
)
def test_equivalent_expressions(ring, text, expected):
    assert parse(text, ring) == parse(expected, ring)


def test_roots_of_unity(ring):
    zeta = parse("z(6,1)", ring)
    assert zeta**6 == 1
    assert parse("z(3,1)", ring) == zeta**2
    assert parse("z(6,-1)", ring) * zeta == 1


def test_variable_named_z_is_still_a_variable(ring):
    p = parse("z^2 + z(2,1)*z", ring)
    assert p == ring.parse("z^2 - z")


@mark.parametrize(
    "text",
    ["", "x +", "x^", "x^y", "x / y", "x / 0", "(x + y", "x $ y", "w", "z(5,1)", "x y"],
)
def test_malformed_input_is_rejected(ring, text):
    with raises(ParseError):
        parse(text, ring)


def test_error_carries_position(ring):
    with raises(ParseError) as exc_info:
        parse("x + $", ring)
    assert exc_info.value.position == 4
    assert exc_info.value.to_dict()["position"] == 4


@mark.parametrize("seed", RANDOM_SEEDS)
def test_printed_polynomials_parse_back(ring, random_poly, seed):
    rng = random.Random(seed)
    for _ in range(25):
        p = random_poly(ring, rng, degree=4, terms=rng.randint(0, 6))
        assert parse(str(p), ring) == p, str(p)
