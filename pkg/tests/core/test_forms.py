import random
from pytest import fixture, mark, raises
from lgorbifold.core.errors import DimensionMismatchError
from lgorbifold.core.forms import (
    DiffForm,
    FormMatrix,
    d_matrix,
    exp_neg,
    exterior_derivative,
    supercommutator,
    supertrace,
    total_parity,
)
from lgorbifold.core.poly import PolyRing, VarSpec
from lgorbifold.core.scalars import CyclotomicField

from ..data import RANDOM_SEEDS


@fixture
def ring():
    return PolyRing([VarSpec("x"), VarSpec("y")], CyclotomicField.of(1))


def test_wedge_is_graded_commutative(ring):
    dx, dy = DiffForm.dx(ring, "x"), DiffForm.dx(ring, "y")
    assert dx.wedge(dy) == -dy.wedge(dx)
    assert dx.wedge(dx).is_zero()
    assert dx.wedge(dy).top_coefficient() == ring.one


def test_exterior_derivative_squares_to_zero(ring):
    p = ring.parse("x^3*y + y^2")
    d1 = exterior_derivative(p)
    assert d1 == DiffForm(ring, {(0,): ring.parse("3*x^2*y"), (1,): ring.parse("x^3 + 2*y")})
    assert exterior_derivative(d1).is_zero()


def test_printing(ring):
    form = DiffForm(ring, {(): ring.parse("x"), (0, 1): ring.parse("2")})
    assert str(form) == "(x) + (2)*dx^dy"
    assert str(DiffForm.zero(ring)) == "0"


def test_odd_endomorphism_against_differential():
    ring = PolyRing([VarSpec("x")], CyclotomicField.of(1))
    x = ring.gen("x")
    dd = d_matrix(((x,),), ((x,),), ring)
    o = FormMatrix.from_scalars(ring, [[0, 1], [-1, 0]], [0, 1])
    # the odd basis vector flips the sign of the one-form it passes
    assert supertrace(o @ dd) == DiffForm.dx(ring, "x").scale(-2)
    assert total_parity(dd) == 0


def test_exp_neg_truncates(ring):
    x = ring.gen("x")
    y = ring.gen("y")
    dd = d_matrix(((x,),), ((y,),), ring)
    once = exp_neg(dd, 1)
    assert once == FormMatrix.identity(ring, [0, 1]) - dd
    twice = exp_neg(dd, 2)
    square = dd @ dd
    assert twice == once + square.scale(ring.field.from_rational(1) / 2)


def test_supertrace_with_rho(ring):
    m = FormMatrix.identity(ring, [0, 1])
    assert supertrace(m).is_zero()
    rho = [[ring.field.one, ring.field.zero], [ring.field.zero, -ring.field.one]]
    assert supertrace(m, rho) == DiffForm.scalar(ring, 2)
    with raises(DimensionMismatchError):
        supertrace(m, [[ring.field.one]])


def test_supercommutator_with_identity_vanishes(ring):
    x = ring.gen("x")
    dd = d_matrix(((x,),), ((x,),), ring)
    e = FormMatrix.identity(ring, [0, 1])
    assert supercommutator(e, dd, 0, 0).is_zero()


SUBSETS = [(), (0,), (1,), (0, 1)]


def _random_form(ring, rng, random_poly, parity):
    """Random form whose degrees all have the given parity."""
    return DiffForm(
        ring, {s: random_poly(ring, rng, terms=2) for s in SUBSETS if len(s) % 2 == parity}
    )


def _random_matrix(ring, rng, random_poly, parities, total):
    """Homogeneous form matrix: entry (i, j) has degree parity total + p_i + p_j."""
    return FormMatrix(
        ring,
        [
            [_random_form(ring, rng, random_poly, (total + pi + pj) % 2) for pj in parities]
            for pi in parities
        ],
        parities,
    )


@mark.parametrize("seed", RANDOM_SEEDS)
def test_exterior_derivative_of_random_matrices(ring, random_poly, seed):
    rng = random.Random(seed)
    parities = [0, 0, 1, 1]
    for _ in range(5):
        m = FormMatrix.from_polys(
            ring, [[random_poly(ring, rng) for _ in parities] for _ in parities], parities
        )
        assert m.exterior_derivative().exterior_derivative().is_zero()
        forms = _random_matrix(ring, rng, random_poly, parities, rng.randint(0, 1))
        assert forms.exterior_derivative().exterior_derivative().is_zero()


@mark.parametrize("seed", RANDOM_SEEDS)
def test_supertrace_kills_supercommutators(ring, random_poly, seed):
    rng = random.Random(seed)
    parities = [0, 0, 1, 1]
    for _ in range(10):
        px, py = rng.randint(0, 1), rng.randint(0, 1)
        X = _random_matrix(ring, rng, random_poly, parities, px)
        Y = _random_matrix(ring, rng, random_poly, parities, py)
        assert total_parity(X) == px or X.is_zero()
        assert supertrace(supercommutator(X, Y, px, py)).is_zero()
