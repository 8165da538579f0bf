import random
from fractions import Fraction

import pytest
import sympy
from mpmath import mp, mpf, mpc

from ramheegner.arith import fundamental_discriminant, is_squarefree, kronecker
from ramheegner.elliptic import (AlgebraicPoint, BadReduction, CurveQ,
                                 Transform, an_coeffs, ap_good, bad_primes,
                                 canonical_height, conductor, curve_lattice,
                                 elliptic_exp, elliptic_log, is_torsion,
                                 minimal_model, point_from_rationals,
                                 quadratic_twist, reduction_kind,
                                 tate_reduction)
from ramheegner.mparith import bits_for_digits, lattice_contains, lattice_reduce
from ramheegner.nfield import NumberField

# small reference cases with classically known conductors
KNOWN_CONDUCTORS = [
    ((0, -1, 1, -10, -20), 11),   # 11.a2-type model
    ((0, -1, 1, 0, 0), 11),       # X_1(11)
    ((1, 0, 1, 4, -6), 14),
    ((1, 1, 1, -10, -10), 15),
    ((0, 1, 0, 4, 4), 20),
    ((1, 0, 0, -4, -1), 21),
    ((0, -1, 0, -4, 4), 24),
    ((0, 0, 1, 0, -7), 27),
    ((0, 0, 0, 1, 0), 64),
    ((0, 0, 0, -1, 0), 32),
    ((0, 0, 0, 0, 1), 36),
    ((0, 0, 1, 0, 0), 27),
    ((1, -1, 0, -2, -1), 49),
    ((0, 0, 1, -1, 0), 37),
    ((0, 1, 1, -2, 0), 389),
    ((0, 0, 1, -7, 6), 5077),
    ((0, 0, 0, -2, 0), 256),
]


def E(*ainvs):
    return CurveQ(*ainvs)


def test_b_c_invariants_identity():
    rng = random.Random(0)
    for _ in range(30):
        try:
            C = CurveQ(rng.randrange(-2, 3), rng.randrange(-3, 4),
                       rng.randrange(-2, 3), rng.randrange(-20, 20),
                       rng.randrange(-40, 40))
        except ValueError:
            continue
        assert C.c4 ** 3 - C.c6 ** 2 == 1728 * C.disc


def test_transform_roundtrip():
    C = E(1, -1, 1, -14, 29)
    T = Transform(Fraction(1), Fraction(2), Fraction(1), Fraction(-3))
    C2 = T.apply(C)
    assert T.inverse().apply(C2).ainvs == C.ainvs
    # point mapping consistency: transformed points satisfy transformed eq
    x, y = Fraction(5), Fraction(1)  # not nec. on curve; use map alg check
    xp, yp = T.map_point(x, y)
    xb, yb = T.inverse_map_point(xp, yp)
    assert (xb, yb) == (x, y)


def test_minimal_model_already_minimal():
    C = E(0, -1, 1, 0, 0)
    Cmin, T = minimal_model(C)
    assert Cmin.ainvs == C.ainvs
    assert T.u == 1


def test_minimal_model_recovers_from_scaling():
    C = E(0, -1, 1, 0, 0)
    # scale by u = 2 in reverse: x -> x/4, y -> y/8 gives non-minimal model
    T = Transform(Fraction(1, 2), Fraction(0), Fraction(0), Fraction(0))
    Cbig = T.apply(C)
    assert Cbig.disc == C.disc * 2 ** 12
    Cmin, _ = minimal_model(Cbig)
    assert Cmin.ainvs == C.ainvs


@pytest.mark.parametrize("ainvs,N", KNOWN_CONDUCTORS)
def test_known_conductors(ainvs, N):
    assert conductor(E(*ainvs)) == N


def test_twist_conductor_formula_family():
    # N(11a2 tensor D) = 11 * disc(Q(sqrt(D)))^2 for squarefree D coprime to 11
    base = E(0, -1, 1, -10, -20)
    for D in (-1, 2, -2, 3, -3, 5, 6, -7, -15):
        ED, _ = quadratic_twist(base, D)
        assert conductor(ED) == 11 * fundamental_discriminant(D) ** 2, D


def test_tate_reduction_contract():
    C = E(0, -1, 1, -10, -20)
    with pytest.raises(ValueError):
        tate_reduction(C, 3)
    rd = tate_reduction(C, 11)
    assert rd.kind in ("SplitMult", "NonsplitMult")
    assert rd.f_p == 1
    rd = tate_reduction(C, 7)
    assert rd.kind == "Good" and rd.f_p == 0


def test_constructed_additive_curve():
    # y^2 = x^3 + p^2 x at p: v(c4) = 2, v(Delta) = 6 -> additive
    p = 7
    C = E(0, 0, 0, p * p, 0)
    rd = tate_reduction(C, p)
    assert rd.kind == "Additive" and rd.f_p == 2


def test_split_vs_nonsplit():
    # 11a: at 11, -c6 mod 11 decides; check against classical a_11 = 1 (split)
    C = E(0, -1, 1, -10, -20)
    rd = tate_reduction(C, 11)
    a11 = 1  # classical value of a_11 for the conductor-11 isogeny class
    assert (rd.kind == "SplitMult") == (a11 == 1)


def test_ap_enumeration_vs_bsgs():
    C = E(0, 0, 1, -1, 0)  # conductor 37
    for p in (10007, 10501, 11003):
        assert ap_good(C, p, method="naive") == ap_good(C, p, method="bsgs")


def test_ap_bad_prime_rejected():
    C = E(0, 0, 1, -1, 0)
    with pytest.raises(BadReduction):
        ap_good(C, 37)


def test_a5_zero_constructed():
    C = E(0, 0, 0, 0, 1)  # y^2 = x^3 + 1 has 6 points over F_5
    assert ap_good(C, 5) == 0


def test_hasse_bound_sample():
    C = E(0, 0, 1, -7, 6)
    rng = random.Random(5)
    primes = [int(p) for p in sympy.primerange(5, 3000)]
    for p in rng.sample(primes, 50):
        if C.disc % p == 0:
            continue
        ap = ap_good(C, p)
        assert ap * ap <= 4 * p


def test_an_coeffs_basics():
    C = E(0, 0, 1, -1, 0)  # 37.a1
    a = an_coeffs(C, 50)
    assert a[1] == 1
    # multiplicativity
    assert a[12] == a[4] * a[3]
    assert a[15] == a[3] * a[5]
    # good-prime recursion with a_p = 0 gives a_{p^2} = -p
    zero_ps = [p for p in (2, 3, 5, 7) if a[p] == 0 and 37 % p != 0]
    for p in zero_ps:
        assert a[p * p] == -p
    # at the multiplicative prime, a_p = +-1 per the size of the smooth locus:
    # #E^sm(F_37) = 38 = 37 + 1 by direct enumeration, i.e. nonsplit
    smooth = 1 + sum(1 for x in range(37) for y in range(37)
                     if (y * y + y - x ** 3 + x) % 37 == 0
                     and not ((2 * y + 1) % 37 == 0 and (1 - 3 * x * x) % 37 == 0))
    assert a[37] == 37 - smooth


def test_an_recursion_good_prime():
    C = E(0, -1, 1, -10, -20)
    a = an_coeffs(C, 100)
    for p in (2, 3, 5, 7):
        assert a[p * p] == a[p] ** 2 - p


def test_quadratic_twist_contract():
    C = E(0, -1, 1, -10, -20)
    with pytest.raises(ValueError):
        quadratic_twist(C, 12)
    with pytest.raises(ValueError):
        quadratic_twist(C, 0)
    # twist by 1 is the identity on minimal models
    E1, _ = quadratic_twist(C, 1)
    assert E1.ainvs == C.ainvs


def test_twist_involution_random():
    rng = random.Random(9)
    curves = [E(0, -1, 1, -10, -20), E(0, 0, 1, -1, 0), E(1, 0, 1, 4, -6)]
    Ds = [-1, 2, -2, 3, 5, -5, 6, 7, -11, 13]
    for _ in range(20):
        C = rng.choice(curves)
        D = rng.choice(Ds)
        ED, _ = quadratic_twist(C, D)
        EDD, _ = quadratic_twist(ED, D)
        Cmin, _ = minimal_model(C)
        assert EDD.ainvs == Cmin.ainvs


def test_twist_ap_relation():
    # a_p(E_D) = (D|p) a_p(E) at good odd p coprime to D
    C = E(0, 0, 1, -1, 0)
    D = -3
    ED, _ = quadratic_twist(C, D)
    for p in (5, 7, 11, 13, 17):
        assert ap_good(ED, p) == kronecker(D, p) * ap_good(C, p)


DIGITS = 45


def test_curve_lattice_eisenstein_validated():
    # construction self-validates against E4/E6; re-check externally at
    # higher precision via g2 reconstruction for two shapes of disc sign
    for ainvs in ((0, 0, 1, -1, 0), (0, 0, 0, 0, 1), (0, -1, 1, -10, -20)):
        C = E(*ainvs)
        L = curve_lattice(C, DIGITS)
        from ramheegner.elliptic import _lattice_matches_curve

        assert _lattice_matches_curve(L, C, bits_for_digits(40))


def test_curve_lattice_orientation_and_real_period():
    C = E(0, 0, 1, -1, 0)
    L = curve_lattice(C, DIGITS)
    with mp.workprec(bits_for_digits(DIGITS)):
        assert (L.w1 / L.w2).imag > 0
        assert abs(L.w2.imag) < 1e-30


def test_twist_lattice_scaling():
    # lattice of E_D equals lattice of E scaled by 1/sqrt(D) up to basis change
    C = E(0, 0, 1, -1, 0)
    D = 5
    ED, phi = quadratic_twist(C, D)
    L = curve_lattice(C, DIGITS)
    LD = curve_lattice(ED, DIGITS)
    with mp.workprec(bits_for_digits(DIGITS)):
        s = mp.sqrt(mpf(D))
        scaled = lattice_reduce(
            type(L).make(L.w1 / s, L.w2 / s, L.prec))
        # same lattice: mutual containment
        assert lattice_contains(scaled, LD.w1) and lattice_contains(scaled, LD.w2)
        assert lattice_contains(LD, scaled.w1) and lattice_contains(LD, scaled.w2)


def test_elliptic_exp_two_torsion():
    C = E(0, 0, 0, -1, 0)  # y^2 = x^3 - x, rational 2-torsion
    L = curve_lattice(C, DIGITS)
    with mp.workprec(bits_for_digits(DIGITS)):
        pt = elliptic_exp(C, L.w2 / 2, DIGITS, lattice=L)
        assert pt is not None
        x, y = pt
        assert abs(2 * y + C.a1 * x + C.a3) < mpf(10) ** (-DIGITS + 8)


def test_elliptic_exp_on_curve_random():
    C = E(0, -1, 1, -10, -20)
    L = curve_lattice(C, DIGITS)
    rng = random.Random(3)
    with mp.workprec(bits_for_digits(DIGITS)):
        for _ in range(8):
            z = mpc(rng.uniform(0.05, 0.9), rng.uniform(0.05, 0.9))
            z = z.real * L.w1 + z.imag * L.w2
            pt = elliptic_exp(C, z, DIGITS, lattice=L)
            x, y = pt
            lhs = y * y + C.a1 * x * y + C.a3 * y
            rhs = x ** 3 + C.a2 * x * x + C.a4 * x + C.a6
            assert abs(lhs - rhs) < mpf(10) ** (-DIGITS + 12) * max(1, abs(rhs))


def test_elliptic_exp_lattice_point_is_infinity():
    C = E(0, 0, 1, -1, 0)
    L = curve_lattice(C, DIGITS)
    assert elliptic_exp(C, L.w1, DIGITS, lattice=L) is None
    assert elliptic_exp(C, 0, DIGITS, lattice=L) is None


def test_exp_log_roundtrip_rational_point():
    C = E(0, 0, 1, -1, 0)
    z = elliptic_log(C, 0, 0, DIGITS)  # P = (0,0) on 37.a1
    pt = elliptic_exp(C, z, DIGITS)
    with mp.workprec(bits_for_digits(DIGITS)):
        assert abs(pt[0] - 0) < mpf(10) ** (-DIGITS + 10)
        assert abs(pt[1] - 0) < mpf(10) ** (-DIGITS + 10)


def test_point_group_law_and_torsion():
    # 2-torsion on y^2 = x^3 - x
    C = E(0, 0, 0, -1, 0)
    P = point_from_rationals(C, 0, 0)
    assert P.add(P) is None
    assert is_torsion(P)
    h = canonical_height(P)
    assert float(h.value) < 1e-20

    # generator of 37.a1
    C = E(0, 0, 1, -1, 0)
    G = point_from_rationals(C, 0, 0)
    assert not is_torsion(G)
    G2 = G.mul(2)
    assert G2.on_curve()


def test_canonical_height_quadraticity():
    C = E(0, 0, 1, -1, 0)
    G = point_from_rationals(C, 0, 0)
    h1 = float(canonical_height(G, max_n=7).value)
    h2 = float(canonical_height(G.mul(2), max_n=6).value)
    assert h2 == pytest.approx(4 * h1, abs=0.02)
    # classical value of the height of (0,0) on 37a is about 0.0511
    assert h1 == pytest.approx(0.0511, abs=0.01)


def test_point_over_quadratic_field():
    # base change y^2 = x^3 - 2 to Q(sqrt(-5)) and use a rational point
    C = E(0, 0, 0, 0, -2)
    K = NumberField.quadratic(-5, bits_for_digits(60))
    P = AlgebraicPoint(C, K, K.element([3]), K.element([5]))
    assert P.on_curve()
    Q = P.mul(3)
    assert Q.on_curve()
    h = canonical_height(P)
    assert float(h.value) > 0.01
