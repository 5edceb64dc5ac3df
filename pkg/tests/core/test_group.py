from fractions import Fraction
from pytest import mark, raises
from lgorbifold.core.errors import CharacterError, ModelError, ResourceError
from lgorbifold.core.group import build_group, sectors
from lgorbifold.core.mf import make_ring
from lgorbifold.core.poly import VarSpec


def _group(names, w, generators, cap=None):
    ring = make_ring([VarSpec(n) for n in names], generators)
    return build_group(generators, ring, ring.parse(w), cap=cap)


@mark.parametrize(
    "generators, order",
    [
        ([], 1),
        ([["1/3", "1/3"]], 3),
        ([["1/3", "1/3"], ["2/3", "2/3"]], 3),
        ([["1/3", "0"], ["0", "1/3"]], 9),
    ],
)
def test_group_orders(generators, order):
    group = _group(["x", "y"], "x^3 + y^3", generators)
    assert group.order == order
    assert group.identity.is_identity


def test_potential_must_be_invariant():
    with raises(ModelError):
        _group(["x", "y"], "x^3 + y^2", [["1/3", "1/3"]])


def test_group_order_cap():
    with raises(ResourceError):
        _group(["x", "y"], "x^3 + y^3", [["1/3", "0"], ["0", "1/3"]], cap=5)


def test_multiplication_and_inverse():
    group = _group(["x"], "x^4", [["1/4"]])
    g = group.element(["1/4"])
    assert group.multiply(g, g).phases == (Fraction(1, 2),)
    assert group.multiply(g, group.inverse(g)).is_identity
    with raises(ModelError):
        group.element(["1/3"])


def test_pullback_action():
    group = _group(["x"], "x^4", [["1/4"]])
    ring = group.ring
    g = group.element(["1/4"])
    # g . x = e(-1/4) x
    assert group.act(g, ring.parse("x")) == ring.parse("z(4,-1)*x")
    assert group.act(g, ring.parse("x^4")) == ring.parse("x^4")
    assert group.monomial_character((1,)) == (Fraction(3, 4),)
    assert group.semi_invariant_character(ring.parse("x^2")) == (Fraction(1, 2),)
    assert group.semi_invariant_character(ring.parse("x + x^2")) is None


def test_characters():
    group = _group(["x"], "x^4", [["1/4"]])
    values = group.character_values(["1/2"])
    assert [v == 1 for v in values].count(True) == 2
    with raises(CharacterError):
        group.character_values(["1/3"])
    with raises(CharacterError):
        group.character_values(["1/2", "1/2"])


def test_character_must_respect_relations():
    # g1 = g2 as elements, so a character must agree on both generators
    group = _group(["x"], "x^2", [["1/2"], ["1/2"]])
    assert group.order == 2
    with raises(CharacterError):
        group.character_values(["1/2", "0"])


def test_sectors_of_fermat_cubic():
    group = _group(["x", "y"], "x^3 + y^3", [["1/3", "0"], ["0", "1/3"]])
    found = sectors(group)
    assert len(found) == 9
    by_fixed = {}
    for s in found:
        by_fixed.setdefault(s.n_g, []).append(s)
    assert len(by_fixed[2]) == 1
    assert len(by_fixed[1]) == 4
    assert len(by_fixed[0]) == 4
    narrow = by_fixed[0][0]
    product = group.field.one
    for lam in narrow.moving_eigenvalues:
        product = product * (1 - lam.inverse())
    assert narrow.denominator == product
    assert found[0].is_identity and found[0].denominator == 1
