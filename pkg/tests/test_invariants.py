import pytest

from skewcalc.errors import BadParamsError, InsufficientDataError
from skewcalc.families import (
    laurent,
    minus_one_plane,
    poly,
    quantum_torus,
    quantum_weyl1,
    weyl1,
)
from skewcalc.invariants import (
    StratTower,
    center_bounded,
    center_torus,
    gk_estimate,
    growth_dims,
    is_locally_algebraic,
    is_locally_nilpotent,
    strat_tower,
    stratiform_length,
    tower_compose,
)
from skewcalc.presentation import identity_morphism, ore_extend, parse_element
from skewcalc.scalars import CYCLOTOMIC, RATIONAL, FieldDescriptor

Q = FieldDescriptor(RATIONAL)
C3 = FieldDescriptor(CYCLOTOMIC, 3)


def test_center_weyl_is_trivial():
    cb = center_bounded(weyl1(Q), 4)
    assert len(cb.basis) == 1
    assert cb.basis[0].degree() == 0


def test_center_minus_one_plane_degree_4():
    cb = center_bounded(minus_one_plane(Q), 4)
    monos = {e.leading_monomial() for e in cb.basis}
    assert monos == {(0, 0), (2, 0), (0, 2), (4, 0), (2, 2), (0, 4)}


def test_center_poly_is_everything():
    p = poly(2, Q)
    cb = center_bounded(p, 2)
    assert len(cb.basis) == len(p.filtration_basis(2))


def test_center_torus_rank2():
    out = center_torus(2, 3, [[0, 1], [-1, 0]])
    assert out["index"] == 9
    assert out["lattice_basis"] == [[3, 0], [0, 3]]


def test_center_torus_validates_antisymmetry():
    with pytest.raises(BadParamsError):
        center_torus(2, 3, [[0, 1], [1, 0]])


def test_center_torus_l1_is_full_lattice():
    out = center_torus(2, 1, [[0, 1], [-1, 0]])
    assert out["index"] == 1


def test_growth_weyl_closed_form():
    dims = growth_dims(weyl1(Q), 8).dims
    assert dims == [(n + 1) * (n + 2) // 2 for n in range(9)]


def test_growth_torus_closed_form():
    q = C3.q()
    p = quantum_torus(2, {(1, 2): q}, C3)
    dims = growth_dims(p, 6).dims
    assert dims == [2 * n * n + 2 * n + 1 for n in range(7)]


def test_gk_estimates_snap():
    assert gk_estimate(growth_dims(poly(3, Q), 12))["snap"] == 3
    assert gk_estimate(growth_dims(weyl1(Q), 12))["snap"] == 2


def test_gk_insufficient_data():
    with pytest.raises(InsufficientDataError):
        gk_estimate(growth_dims(poly(1, Q), 4))


def test_locally_algebraic_identity():
    p = weyl1(Q)
    out = is_locally_algebraic(p, identity_morphism(p), bound=5)
    assert out["status"] == "TRUE"


def test_locally_nilpotent_d_dx():
    p = poly(2, Q)
    delta = {"x1": p.one(), "x2": p.zero()}
    assert is_locally_nilpotent(p, delta)["status"] == "TRUE"


def test_not_locally_nilpotent_euler():
    p = poly(1, Q)
    delta = {"x1": p.generator("x1")}  # Euler derivation: cycle x -> x
    assert is_locally_nilpotent(p, delta)["status"] == "FALSE"


def test_stratiform_bookkeeping():
    t = StratTower(["ORE", "FINITE", "ORE"])
    assert stratiform_length(t) == 2
    t2 = tower_compose(t, 1)
    assert stratiform_length(t2) == 3
    assert stratiform_length(strat_tower(weyl1(Q))) == 2
    assert stratiform_length(strat_tower(quantum_weyl1())) == 1
