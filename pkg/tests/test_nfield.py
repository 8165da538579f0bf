from fractions import Fraction

import pytest
from mpmath import mp, mpf, mpc

from ramheegner.mparith import bits_for_digits
from ramheegner.nfield import (NFElt, NotInField, NumberField, express_in_field,
                               field_sqrt, recognize_algebraic,
                               recognize_rational)

PREC = bits_for_digits(60)


def K5():
    return NumberField.quadratic(-5, PREC)


def test_quadratic_field_arithmetic():
    K = K5()
    th = K.theta()  # sqrt(-5)
    assert (th * th).rational_value() == -5
    x = K.element([Fraction(1, 2), Fraction(3, 4)])
    y = K.element([2, -1])
    assert (x + y).coords == (Fraction(5, 2), Fraction(-1, 4))
    assert ((x * y) - (y * x)).is_zero()
    inv = x.inverse()
    assert (x * inv).rational_value() == 1


def test_inverse_in_quartic_field():
    # x^4 - 10x^2 + 1, root sqrt(2)+sqrt(3)
    with mp.workprec(PREC):
        root = mp.sqrt(2) + mp.sqrt(3)
    F = NumberField.from_poly((1, 0, -10, 0, 1), root, PREC)
    x = F.element([1, 2, 0, 1])
    assert (x * x.inverse()).rational_value() == 1


def test_embedding_consistency():
    K = K5()
    x = K.element([Fraction(1, 3), Fraction(-2, 7)])
    with mp.workprec(PREC):
        want = mpf(1) / 3 - mpf(2) / 7 * mp.sqrt(mpc(-5))
        assert abs(x.embed() - want) < mpf(2) ** (-PREC + 16)


def test_conjugates_distinguished_first():
    K = K5()
    th = K.theta()
    cs = th.conjugates()
    with mp.workprec(PREC):
        assert abs(cs[0] - K.embedding) < mpf(2) ** (-PREC + 16)
        assert abs(cs[1] + K.embedding) < mpf(2) ** (-PREC + 16)


def test_charpoly_and_height():
    K = K5()
    th = K.theta()
    assert th.charpoly() == (5, 0, 1)
    x = K.element([Fraction(1, 2)])
    # h(1/2) = log 2
    with mp.workprec(80):
        assert abs(x.global_height() - mp.log(2)) < 1e-15
        # h(sqrt(-5)) = log(5)/2
        assert abs(th.global_height() - mp.log(5) / 2) < 1e-12


def test_express_in_field():
    K = K5()
    with mp.workprec(PREC):
        z = mpf(3) / 8 + mpf(11) / 2 * mp.sqrt(mpc(-5))
    e = express_in_field(z, K, PREC)
    assert e.coords == (Fraction(3, 8), Fraction(11, 2))


def test_express_rejects_foreign_value():
    K = K5()
    with mp.workprec(PREC):
        z = mp.sqrt(2)
    with pytest.raises(NotInField):
        express_in_field(z, K, PREC)


def test_recognize_rational():
    with mp.workprec(PREC):
        assert recognize_rational(mpf(22) / 7, PREC) == Fraction(22, 7)
        big = Fraction(-123456789, 65536)
        assert recognize_rational(mpf(big.numerator) / big.denominator, PREC) == big


def test_field_sqrt():
    K = K5()
    # sqrt of -4-2*sqrt(-5)... pick a known square: (1+sqrt(-5))^2 = -4+2sqrt(-5)
    sq = K.element([-4, 2])
    r = field_sqrt(sq)
    assert r is not None
    assert (r * r - sq).is_zero()
    # non-square has no root in K
    assert field_sqrt(K.element([2, 0])) is None


def test_recognize_algebraic_factors_reducible():
    # z = sqrt(2): feed max_deg 4; a degree-4 multiple may be found but the
    # returned field polynomial must be the irreducible factor
    with mp.workprec(PREC):
        z = mp.sqrt(2)
    F, elt = recognize_algebraic(z, 4, PREC)
    assert F.min_poly == (-2, 0, 1)
    with mp.workprec(PREC):
        assert abs(elt.embed() - z) < mpf(2) ** (-PREC // 2)


def test_recognize_algebraic_rational():
    with mp.workprec(PREC):
        z = mpf(-7) / 3
    F, elt = recognize_algebraic(z, 3, PREC)
    assert F.degree == 1
    assert elt.rational_value() == Fraction(-7, 3)
