from fractions import Fraction
from pytest import mark, raises
from lgorbifold.core.errors import ConstructionError, EquivarianceError, ModelError
from lgorbifold.core.mf import (
    Morphism,
    diagonal_kernel,
    difference_quotients,
    direct_sum,
    dual,
    homotopy_defect,
    identity_morphism,
    koszul,
    make_mf,
    morphism_dual,
    restrict_to_sector,
    tensor,
    twist,
)
from lgorbifold.core.poly import matrix_is_zero


#
# Models
#
def test_model_requires_isolated_singularity(make_model):
    with raises(ModelError):
        make_model(["x", "y"], "x^2*y")


def test_graded_model_requires_quasi_homogeneous_potential(make_model):
    with raises(ModelError):
        make_model(["x"], "x^2 + x^3")
    model = make_model(["x", "y"], "x^2 + y^3", graded=False)
    assert not model.graded


def test_weighted_model_degree(make_model):
    model = make_model([("x", Fraction(1, 3)), ("y", Fraction(1, 2))], "x^3 + y^2")
    assert model.d == 1
    assert model.milnor.milnor_number == 2


#
# Koszul factorizations
#
def test_koszul_point_on_cubic(fermat, point_mf):
    model = fermat(3, order=3)
    P = point_mf(model)
    x = model.ring.gen("x")
    assert P.rank == 1
    assert P.A == ((x**2,),) and P.B == ((x,),)
    assert P.weights_even == (0,) and P.weights_odd == (-2,)
    rho0, rho1 = P.rho_of(model.group.element(["1/3"]).index)
    assert rho0[0][0] == 1
    assert rho1[0][0] == model.field.exp_phase(Fraction(1, 3))


@mark.parametrize("k", [1, 2, 3])
def test_koszul_rank_and_homotopy(make_model, k):
    names = ["x", "y", "z"][:k]
    w = " + ".join(f"{n}^3" for n in names)
    model = make_model(names, w, [["1/3"] * k])
    P = koszul([(n, f"{n}^2") for n in names], model, "P")
    assert P.rank == 2 ** (k - 1)
    for name in names:
        assert matrix_is_zero(homotopy_defect(P, name))


def test_koszul_sum_must_be_potential(fermat):
    model = fermat(3)
    with raises(ConstructionError):
        koszul([("x", "x")], model)


def test_koszul_entries_must_be_semi_invariant(make_model):
    model = make_model(["x", "y"], "x^3 + y^3", [["1/3", "0"]])
    with raises(EquivarianceError):
        koszul([("x + y", "x^2 - x*y + y^2")], model)


#
# Validation
#
def test_factorization_must_square_to_potential(fermat):
    model = fermat(2, order=2)
    x = model.ring.gen("x")
    with raises(ConstructionError):
        make_mf(model, [[x]], [[x**2]], [([[1]], [[-1]])])


def test_rho_must_intertwine(fermat):
    model = fermat(2, order=2)
    x = model.ring.gen("x")
    with raises(EquivarianceError):
        make_mf(model, [[x]], [[x]], [([[1]], [[1]])])


def test_rho_must_respect_relations(fermat):
    model = fermat(3, order=3)
    x = model.ring.gen("x")
    z = model.field.exp_phase(Fraction(1, 3))
    with raises(EquivarianceError):
        make_mf(model, [[x**2]], [[x]], [([[2]], [[2 * z]])], [0], [-2])


def test_grading_is_checked(fermat):
    model = fermat(2)
    x = model.ring.gen("x")
    with raises(ConstructionError):
        make_mf(model, [[x]], [[x]], [], [0], [0])


#
# Algebra
#
def test_dual(fermat, point_mf):
    model = fermat(3, order=3)
    P = point_mf(model)
    Pd = dual(P)
    assert Pd.potential == -model.w
    assert Pd.name == "P^v"
    g = model.group.element(["1/3"]).index
    assert Pd.rho_of(g)[1][0][0] == P.rho_of(g)[1][0][0].inverse()
    twice = dual(Pd)
    assert twice.potential == model.w
    assert twice.A == tuple(tuple(-x for x in row) for row in P.A)


def test_twist_multiplies_rho(fermat, point_mf):
    model = fermat(3, order=3)
    P = point_mf(model)
    P1 = twist(P, ["1/3"], "P1")
    g = model.group.element(["1/3"]).index
    z = model.field.exp_phase(Fraction(1, 3))
    assert P1.rho_of(g)[0][0][0] == z
    assert P1.rho_of(g)[1][0][0] == z * P.rho_of(g)[1][0][0]


def test_direct_sum_and_tensor(fermat, point_mf):
    model = fermat(2, order=2)
    P = point_mf(model)
    S = direct_sum(P, P)
    assert S.rank == 2 and S.name == "P+P"
    T = tensor(P, P)
    assert T.rank == 2
    assert T.potential == 2 * model.w
    assert matrix_is_zero(homotopy_defect(T, "x"))


def test_external_tensor_product(make_model):
    left = make_model(["x"], "x^2", [["1/2"]])
    right = make_model(["y"], "y^3", [["1/3"]])
    P = koszul([("x", "x")], left, "P")
    Q = koszul([("y", "y^2")], right, "Q")
    T = tensor(P, Q)
    assert T.model.group.order == 6
    assert T.potential == T.ring.parse("x^2 + y^3")
    assert T.model.field.conductor == 6


def test_restriction_to_narrow_sector(fermat, point_mf):
    model = fermat(2, order=2)
    P = point_mf(model)
    narrow = [s for s in model.sectors if s.n_g == 0][0]
    restricted = restrict_to_sector(P, narrow)
    assert restricted.A[0][0].is_zero()
    assert restricted.rho1[0][0] == -1


#
# Morphisms
#
def test_identity_is_closed_and_composes(fermat, point_mf):
    P = point_mf(fermat(3, order=3))
    e = identity_morphism(P)
    assert e.is_closed()
    assert e.compose(e).matrix == e.matrix


def test_odd_endomorphism(fermat, point_mf):
    model = fermat(2)
    P = point_mf(model)
    ring = model.ring
    o = Morphism(P, P, ((ring.zero, ring.one), (-ring.one, ring.zero)), 1)
    assert o.is_closed()
    assert o.compose(o).matrix == ((-ring.one, ring.zero), (ring.zero, -ring.one))
    od = morphism_dual(o)
    assert od.is_closed()
    assert od.source.potential == -model.w


#
# Diagonal
#
def test_difference_quotients(make_model):
    model = make_model(["x", "y"], "x^3 + x*y^2")
    product, kernel = diagonal_kernel(model)
    ring = product.ring
    n = model.nvars
    w_x = model.w.coerce(ring, {"x": "x_1", "y": "y_1"})
    w_y = model.w.coerce(ring, {"x": "x_2", "y": "y_2"})
    t = difference_quotients(w_x, ring, n)
    total = ring.zero
    for i, name in enumerate(model.ring.names):
        total = total + (ring.gen(name + "_1") - ring.gen(name + "_2")) * t[i]
    assert total == w_y - w_x
    assert kernel.potential == w_y - w_x


@mark.parametrize("order", [1, 2, 3])
def test_diagonal_kernel_is_equivariant(fermat, order):
    model = fermat(3, order=order) if order != 2 else fermat(2, order=2)
    product, kernel = diagonal_kernel(model)
    assert product.group.order == order**2
    assert kernel.rank == order
    assert kernel.name == "diagonal"
