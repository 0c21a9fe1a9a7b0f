from fractions import Fraction

import pytest

from skewcalc.errors import BadParamsError, DivisionByZeroError, ExprSyntaxError
from skewcalc.scalars import (
    CYCLOTOMIC,
    PRIME,
    RATFUNC_Q,
    RATIONAL,
    FieldDescriptor,
    scalar_arith,
    scalar_parse,
)

Q = FieldDescriptor(RATIONAL)
F5 = FieldDescriptor(PRIME, 5)
RQ = FieldDescriptor(RATFUNC_Q)
C3 = FieldDescriptor(CYCLOTOMIC, 3)


def test_rational_arithmetic():
    a = Q.from_fraction(Fraction(2, 3))
    b = Q.from_int(5)
    assert str(a + b) == "17/3"
    assert (a * a.inv()).is_one()
    assert (a - a).is_zero()


def test_prime_field_wraps():
    a = F5.from_int(7)
    assert str(a) == "2"
    assert (a + F5.from_int(3)).is_zero()
    assert (F5.from_int(2) * F5.from_int(3)).is_one()


def test_prime_field_requires_prime():
    with pytest.raises(BadParamsError):
        FieldDescriptor(PRIME, 6).zero()


def test_ratfunc_cancellation():
    q = RQ.q()
    one = RQ.one()
    # (q^2 - 1)/(q - 1) == q + 1
    lhs = (q * q - one) * (q - one).inv()
    assert lhs == q + one


def test_cyclotomic_reduction():
    q = C3.q()
    # q^3 = 1 and 1 + q + q^2 = 0
    assert (q * q * q).is_one()
    assert (C3.one() + q + q * q).is_zero()


def test_cyclotomic_inverse():
    q = C3.q()
    x = q - C3.one()
    assert (x * x.inv()).is_one()


def test_division_by_zero():
    with pytest.raises(DivisionByZeroError):
        Q.zero().inv()


def test_scalar_parse_expressions():
    assert scalar_parse(Q, "1/2 + 3*(2 - 1)") == Q.from_fraction(Fraction(7, 2))
    q = RQ.q()
    assert scalar_parse(RQ, "(q^2 - 1)/(q - 1)") == q + RQ.one()
    assert scalar_parse(C3, "q^4") == C3.q()


def test_scalar_parse_syntax_error_position():
    with pytest.raises(ExprSyntaxError) as err:
        scalar_parse(Q, "1 + ")
    assert err.value.code == "SYNTAX_ERROR"


def test_scalar_arith_api():
    assert scalar_arith("mul", Q.from_int(32), Q.from_int(32)) == Q.from_int(1024)
    assert scalar_arith("sub", Q.from_int(3), Q.from_int(3)).is_zero()


def test_characteristics():
    assert Q.characteristic() == 0
    assert F5.characteristic() == 5
    assert RQ.characteristic() == 0
    assert C3.characteristic() == 0
