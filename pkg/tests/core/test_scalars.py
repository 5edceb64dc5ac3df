import random
from fractions import Fraction
from pytest import mark, raises
from lgorbifold.core.errors import ConductorMismatchError, CycZeroDivisionError
from lgorbifold.core.scalars import CyclotomicField, conductor_for

from ..data import RANDOM_SEEDS


def _random_element(field, rng):
    return field.from_power_basis(
        [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(field.degree)]
    )


@mark.parametrize("m", [1, 2, 3, 4, 5, 6, 8, 12])
def test_roots_of_unity_have_order_m(m):
    f = CyclotomicField.of(m)
    z = f.zeta()
    assert z**m == 1
    for k in range(1, m):
        assert z**k != 1


@mark.parametrize("m", [3, 4, 5, 7])
def test_sum_of_primitive_powers_vanishes(m):
    f = CyclotomicField.of(m)
    total = f.zero
    for k in range(m):
        total = total + f.zeta(k)
    assert total == 0


def test_fields_are_cached_per_conductor():
    assert CyclotomicField.of(6) is CyclotomicField.of(6)
    assert CyclotomicField.of(6).degree == 2


def test_exp_phase():
    f = CyclotomicField.of(4)
    assert f.exp_phase(Fraction(1, 2)) == -1
    assert f.exp_phase(Fraction(1, 4)) ** 2 == -1
    assert f.exp_phase(Fraction(-1, 4)) == f.zeta(3)


def test_embedding_of_subfield():
    f3, f6 = CyclotomicField.of(3), CyclotomicField.of(6)
    z3 = f6.embed(f3.zeta())
    assert z3 == f6.zeta(2)
    assert f6.coerce(f3.zeta()) ** 3 == 1


def test_mixed_conductors_are_rejected():
    with raises(ConductorMismatchError):
        CyclotomicField.of(3).zeta() + CyclotomicField.of(4).zeta()
    with raises(ConductorMismatchError):
        CyclotomicField.of(4).root_of_unity(3)


def test_division_by_zero():
    with raises(CycZeroDivisionError):
        CyclotomicField.of(5).zero.inverse()


@mark.parametrize("seed", RANDOM_SEEDS)
@mark.parametrize("m", [3, 5, 8, 12])
def test_field_axioms(seed, m):
    rng = random.Random(seed)
    f = CyclotomicField.of(m)
    for _ in range(5):
        a, b, c = (_random_element(f, rng) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        if a:
            assert a * a.inverse() == 1
            assert (b / a) * a == b


def test_rationality_and_printing():
    f = CyclotomicField.of(3)
    z = f.zeta()
    # 1 + z + z^2 = 0
    assert (z + z**2) == -1
    assert (z + z**2).is_integer()
    assert not z.is_rational()
    assert str(f.from_rational(Fraction(3, 2))) == "3/2"
    assert str(2 * z - 1) == "-1 + 2*z(3,1)"


def test_conductor_for():
    assert conductor_for([Fraction(1, 2), Fraction(1, 3)]) == 6
    assert conductor_for([]) == 1
