import pytest

from skewcalc.errors import NotADomainError
from skewcalc.families import (
    laurent,
    minus_one_plane,
    poly,
    quantum_torus,
    quantum_weyl1,
    weyl1,
)
from skewcalc.divisor import (
    divisor_closure,
    is_controlling,
    subalgebra_closure_bounded,
    subword_search,
)
from skewcalc.presentation import ore_extend, parse_element
from skewcalc.scalars import CYCLOTOMIC, RATIONAL, FieldDescriptor

Q = FieldDescriptor(RATIONAL)
C3 = FieldDescriptor(CYCLOTOMIC, 3)


def test_subword_search_finds_factorizations():
    p = poly(2, Q)
    f = parse_element(p, "x1^2*x2")
    hits = subword_search(p, f, {"max_deg_a": 1, "max_deg_b": 1})
    assert all(h.verify() for h in hits)
    gs = {str(h.g) for h in hits}
    assert "x2" in gs and "x1^2*x2" in gs


def test_subword_search_requires_domain():
    p = poly(1, Q).with_flags({}, None)
    p.flags.pop("DOMAIN", None)
    with pytest.raises(NotADomainError):
        subword_search(p, p.one(), {})


def test_subalgebra_closure_powers_of_x():
    p = poly(2, Q)
    span = subalgebra_closure_bounded(p, [p.generator("x1")], 4)
    assert len(span) == 5  # 1, x, x^2, x^3, x^4


def test_subalgebra_closure_z_powers():
    p = quantum_weyl1()
    z = parse_element(p, "x*y - y*x")
    # z has degree 2: its powers up to z^3 need cap 6
    span6 = subalgebra_closure_bounded(p, [z], 6)
    assert len(span6) == 4
    span3 = subalgebra_closure_bounded(p, [z], 3)
    assert len(span3) == 2


def test_subalgebra_closure_minus_one_plane_even_span():
    p = minus_one_plane(Q)
    s = [parse_element(p, "x^2"), parse_element(p, "y^2")]
    span = subalgebra_closure_bounded(p, s, 4)
    assert len(span) == 6


def test_divisor_closure_z_controls_quantum_weyl():
    p = quantum_weyl1()
    z = parse_element(p, "x*y - y*x")
    report = divisor_closure(p, [z], {"degree_cap": 3, "max_rounds": 2})
    assert report.status == "FULL"
    assert len(report.rounds) <= 2


def test_divisor_closure_kxy_from_x_inconclusive():
    p = poly(2, Q)
    report = divisor_closure(p, [p.generator("x1")],
                             {"degree_cap": 3, "max_rounds": 2})
    assert report.status == "INCONCLUSIVE"
    monos = {e.leading_monomial() for e in report.certified_basis}
    assert monos == {(0, 0), (1, 0), (2, 0), (3, 0)}


def test_divisor_closure_torus_unit_is_controlling():
    p = quantum_torus(2, {(1, 2): C3.q()}, C3)
    out = is_controlling(p, [p.one()], {"degree_cap": 2, "max_rounds": 2})
    assert out["status"] == "CONTROLLING"


def test_divisor_closure_idempotent():
    p = quantum_weyl1()
    z = parse_element(p, "x*y - y*x")
    caps = {"degree_cap": 3, "max_rounds": 2}
    first = divisor_closure(p, [z], caps)
    again = divisor_closure(p, first.certified_basis, caps)
    assert again.status == "FULL"
    assert {str(e) for e in again.certified_basis} == {
        str(e) for e in first.certified_basis
    }


def test_closure_stable_under_ore_extension():
    # adjoining a central variable must not enlarge the closure of z
    p = quantum_weyl1()
    ext = ore_extend(p, "t")
    ext = ext.with_flags({"DOMAIN": True}, "asserted(test)")
    z = parse_element(ext, "x*y - y*x")
    report = divisor_closure(ext, [z], {"degree_cap": 3, "max_rounds": 2})
    t_pos = ext.gen_position("t")
    for e in report.certified_basis:
        assert all(m[t_pos] == 0 for m in e.terms)
