"""Elliptic curves over Q: invariants, minimal models, Tate's algorithm,
Fourier coefficients, quadratic twists, period lattices, the analytic
uniformization, exact points over number fields, and canonical heights.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import sympy
from mpmath import mp, mpf, mpc

from .arith import kronecker, is_squarefree, valuation
from .mparith import (DEFAULT_PREC_BITS, Lattice2, PrecReal, as_mpc,
                      bits_for_digits, lattice_coordinates, lattice_reduce,
                      lattice_reduce_mod)
from .nfield import NFElt, NumberField


class BadReduction(ValueError):
    pass


# ---------------------------------------------------------------------------
# curves and transformations


@dataclass(frozen=True)
class CurveQ:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    label: str = ""

    def __post_init__(self):
        if self.disc == 0:
            raise ValueError("singular Weierstrass equation")

    @property
    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self):
        return self.a1 ** 2 + 4 * self.a2

    @property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self):
        return self.a3 ** 2 + 4 * self.a6

    @property
    def b8(self):
        return (self.a1 ** 2 * self.a6 + 4 * self.a2 * self.a6
                - self.a1 * self.a3 * self.a4 + self.a2 * self.a3 ** 2
                - self.a4 ** 2)

    @property
    def c4(self):
        return self.b2 ** 2 - 24 * self.b4

    @property
    def c6(self):
        return -self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def disc(self):
        return (-self.b2 ** 2 * self.b8 - 8 * self.b4 ** 3
                - 27 * self.b6 ** 2 + 9 * self.b2 * self.b4 * self.b6)

    @property
    def j(self):
        return Fraction(self.c4 ** 3, self.disc)

    def rhs_coeffs(self):
        return (self.a6, self.a4, self.a2, 1)

    def with_label(self, label):
        return CurveQ(*self.ainvs, label=label)

    def __repr__(self):
        lbl = " %s" % self.label if self.label else ""
        return "CurveQ%s%r" % (lbl, self.ainvs)


@dataclass(frozen=True)
class Transform:
    """Change of coordinates x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.

    Maps a model E to the model E' = apply(E); points move by
    x' = (x - r)/u^2, y' = (y - s(x - r) - t)/u^3.
    `u, r, s, t` are Fractions so inverses stay representable.
    """

    u: Fraction
    r: Fraction
    s: Fraction
    t: Fraction

    @classmethod
    def identity(cls):
        return cls(Fraction(1), Fraction(0), Fraction(0), Fraction(0))

    def apply(self, E):
        u, r, s, t = self.u, self.r, self.s, self.t
        a1 = Fraction(E.a1 + 2 * s, 1) / u
        a2 = (E.a2 - s * E.a1 + 3 * r - s * s) / u ** 2
        a3 = (E.a3 + r * E.a1 + 2 * t) / u ** 3
        a4 = (E.a4 - s * E.a3 + 2 * r * E.a2 - (t + r * s) * E.a1
              + 3 * r * r - 2 * s * t) / u ** 4
        a6 = (E.a6 + r * E.a4 + r * r * E.a2 + r ** 3 - t * E.a3
              - t * t - r * t * E.a1) / u ** 6
        vals = [a1, a2, a3, a4, a6]
        if any(v.denominator != 1 for v in vals):
            raise ValueError("transform does not yield an integral model")
        return CurveQ(*[int(v) for v in vals], label=E.label)

    def map_point(self, x, y):
        u, r, s, t = self.u, self.r, self.s, self.t
        xp = (x - r) / (u * u)
        yp = (y - s * (x - r) - t) / (u ** 3)
        return xp, yp

    def inverse_map_point(self, xp, yp):
        u, r, s, t = self.u, self.r, self.s, self.t
        x = u * u * xp + r
        y = u ** 3 * yp + s * u * u * xp + t
        return x, y

    def compose(self, other):
        """Transform equal to applying self first, then other."""
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = other.u, other.r, other.s, other.t
        return Transform(u1 * u2,
                         u1 * u1 * r2 + r1,
                         u1 * s2 + s1,
                         u1 ** 3 * t2 + s1 * u1 * u1 * r2 + t1)

    def inverse(self):
        u, r, s, t = self.u, self.r, self.s, self.t
        return Transform(1 / u, -r / u ** 2, -s / u, (r * s - t) / u ** 3)


def curve_from_c_invariants(c4, c6):
    """Integral model with the given (c4, c6), if one exists (Kraus).

    Searches the twelve reduced coefficient combinations directly, which is
    equivalent to the standard congruence conditions at 2 and 3.
    """
    if c4 ** 3 - c6 ** 2 == 0:
        return None
    for A1 in (0, 1):
        for A2 in (-1, 0, 1):
            for A3 in (0, 1):
                b2 = A1 * A1 + 4 * A2
                if (b2 * b2 - c4) % 24:
                    continue
                b4 = (b2 * b2 - c4) // 24
                if (b4 - A1 * A3) % 2:
                    continue
                A4 = (b4 - A1 * A3) // 2
                num = -b2 ** 3 + 36 * b2 * b4 - c6
                if num % 216:
                    continue
                b6 = num // 216
                if (b6 - A3 * A3) % 4:
                    continue
                A6 = (b6 - A3 * A3) // 4
                E = CurveQ(A1, A2, A3, A4, A6)
                if E.c4 == c4 and E.c6 == c6:
                    return E
    return None


def minimal_model(E):
    """Globally minimal model (Laska-Kraus-Connell) plus the transform to it.

    Returns (E_min, T) with T.apply(E) == E_min.
    """
    c4, c6 = E.c4, E.c6
    u0 = 1
    if c4 == 0:
        primes = sympy.factorint(abs(c6)).keys()
    elif c6 == 0:
        primes = sympy.factorint(abs(c4)).keys()
    else:
        primes = sympy.factorint(gcd(abs(c4), abs(c6))).keys()
    for p in primes:
        d = min(valuation(c4, p) // 4, valuation(c6, p) // 6) if c4 and c6 else (
            valuation(c6, p) // 6 if c4 == 0 else valuation(c4, p) // 4)
        u0 *= p ** d
    for div in (1, 2, 3, 6):
        if u0 % div:
            continue
        u = u0 // div
        cand = curve_from_c_invariants(c4 // u ** 4, c6 // u ** 6)
        if cand is not None:
            Emin = cand.with_label(E.label)
            T = _connecting_transform(E, Emin, Fraction(u))
            return Emin, T
    raise AssertionError("no integral model found for minimal c-invariants")


def _connecting_transform(E, E2, u):
    """Transform T with T.apply(E) == E2, given the scaling factor u."""
    s = (u * E2.a1 - E.a1) / 2
    r = (u ** 2 * E2.a2 - E.a2 + s * E.a1 + s * s) / 3
    t = (u ** 3 * E2.a3 - E.a3 - r * E.a1) / 2
    T = Transform(u, r, s, t)
    assert T.apply(E).ainvs == E2.ainvs
    return T


# ---------------------------------------------------------------------------
# reduction types and conductor


@dataclass(frozen=True)
class ReductionData:
    p: int
    kind: str  # Good | SplitMult | NonsplitMult | Additive
    f_p: int
    v_delta_min: int
    v_c4: int
    v_j: int


def tate_reduction(E, p):
    """Reduction data at a prime p > 3 for a model minimal at p."""
    if p <= 3:
        raise ValueError("p <= 3 is out of scope for tate_reduction")
    Emin, _ = minimal_model(E)
    d = Emin.disc
    v = valuation(d, p) if d % p == 0 else 0
    vc4 = valuation(Emin.c4, p) if Emin.c4 % p == 0 and Emin.c4 != 0 else (
        10 ** 9 if Emin.c4 == 0 else 0)
    vj = (3 * vc4 - v) if Emin.c4 != 0 else (10 ** 9 if v == 0 else 3 * 10 ** 9)
    if v == 0:
        return ReductionData(p, "Good", 0, 0, vc4, vj if Emin.c4 else 0)
    if vc4 == 0:
        split = kronecker(-Emin.c6 % p, p) == 1
        kind = "SplitMult" if split else "NonsplitMult"
        return ReductionData(p, kind, 1, v, vc4, vj)
    return ReductionData(p, "Additive", 2, v, min(vc4, 10 ** 9), vj)


def _singular_point_modp(E, p):
    for x0 in range(p):
        for y0 in range(p):
            f = (y0 * y0 + E.a1 * x0 * y0 + E.a3 * y0
                 - x0 ** 3 - E.a2 * x0 * x0 - E.a4 * x0 - E.a6)
            fx = E.a1 * y0 - 3 * x0 * x0 - 2 * E.a2 * x0 - E.a4
            fy = 2 * y0 + E.a1 * x0 + E.a3
            if f % p == 0 and fx % p == 0 and fy % p == 0:
                return x0, y0
    return None


def _shift(E, r=0, s=0, t=0):
    return Transform(Fraction(1), Fraction(r), Fraction(s), Fraction(t)).apply(E)


def conductor_exponent_small_prime(E, p):
    """Full Tate's algorithm at p in {2, 3}; returns (f_p, kind)."""
    assert p in (2, 3)
    while True:
        d = E.disc
        if d % p:
            return 0, "Good"
        n = valuation(d, p)
        sing = _singular_point_modp(E, p)
        assert sing is not None
        E = _shift(E, r=sing[0], t=sing[1])
        if E.b2 % p:
            # multiplicative: split iff T^2 + a1 T - a2 has a root mod p
            split = any((T * T + E.a1 * T - E.a2) % p == 0 for T in range(p))
            return 1, ("SplitMult" if split else "NonsplitMult")
        if E.a6 % (p * p):
            return n, "Additive"  # type II
        if E.b8 % (p ** 3):
            return n - 1, "Additive"  # type III
        if E.b6 % (p ** 3):
            return n - 2, "Additive"  # type IV
        # normalize: p|a1, p|a2, p^2|a3, p^2|a4, p^3|a6
        E = _normalize_step6(E, p)
        # P(T) = T^3 + a2/p T^2 + a4/p^2 T + a6/p^3 over F_p
        A2, A4, A6 = E.a2 // p, E.a4 // p ** 2, E.a6 // p ** 3
        roots = {}
        for T in range(p):
            m = _root_multiplicity((1, A2, A4, A6), T, p)
            if m:
                roots[T] = m
        dP = _cubic_disc(A2, A4, A6)
        if dP % p:
            return n - 4, "Additive"  # type I*0
        if max(roots.values(), default=1) == 2:
            rho = next(T for T, m in roots.items() if m == 2)
            E = _shift(E, r=p * rho)
            f = _istar_loop(E, p, n)
            return f, "Additive"
        # triple root
        rho = next(T for T, m in roots.items() if m == 3)
        E = _shift(E, r=p * rho)
        # Y^2 + a3/p^2 Y - a6/p^4 separable -> IV*
        A3, A6 = E.a3 // p ** 2, E.a6 // p ** 4
        disc = A3 * A3 + 4 * A6
        if disc % p:
            return n - 6, "Additive"  # type IV*
        tau = _quad_double_root(1, A3, -A6, p)
        E = _shift(E, t=p * p * tau)
        if E.a4 % p ** 4:
            return n - 7, "Additive"  # type III*
        if E.a6 % p ** 6:
            return n - 8, "Additive"  # type II*
        # non-minimal at p: rescale and restart
        T = Transform(Fraction(p), Fraction(0), Fraction(0), Fraction(0))
        E = T.apply(E)


def _cubic_disc(a, b, c):
    # disc of T^3 + a T^2 + b T + c
    return 18 * a * b * c - 4 * a ** 3 * c + a * a * b * b - 4 * b ** 3 - 27 * c * c


def _root_multiplicity(coeffs_desc, T0, p):
    """Multiplicity of T0 as a root mod p (synthetic division; derivative
    tests are unreliable in small characteristic)."""
    cur = [c % p for c in coeffs_desc]
    mult = 0
    while len(cur) > 1:
        # synthetic division by (T - T0)
        out = [cur[0]]
        for c in cur[1:]:
            out.append((out[-1] * T0 + c) % p)
        if out[-1] % p:
            break
        mult += 1
        cur = out[:-1]
    return mult


def _quad_double_root(A, B, C, p):
    """Double root mod p of A Y^2 + B Y + C (all coefficients integral)."""
    for Y in range(p):
        if (A * Y * Y + B * Y + C) % p == 0 and (2 * A * Y + B) % p == 0:
            return Y
    raise AssertionError("no double root found")


def _normalize_step6(E, p):
    for s in range(p):
        for t0 in range(p * p):
            T = Transform(Fraction(1), Fraction(0), Fraction(s), Fraction(t0))
            E2 = T.apply(E)
            if (E2.a1 % p == 0 and E2.a2 % p == 0 and E2.a3 % p ** 2 == 0
                    and E2.a4 % p ** 2 == 0 and E2.a6 % p ** 3 == 0):
                return E2
    # widen with an r-shift; should not be needed in practice
    for r in range(p):
        for s in range(p):
            for t0 in range(p * p):
                T = Transform(Fraction(1), Fraction(p * r), Fraction(s), Fraction(t0))
                E2 = T.apply(E)
                if (E2.a1 % p == 0 and E2.a2 % p == 0 and E2.a3 % p ** 2 == 0
                        and E2.a4 % p ** 2 == 0 and E2.a6 % p ** 3 == 0):
                    return E2
    raise AssertionError("step-6 normalization failed")


def _istar_loop(E, p, n):
    """Type I*nu subprocedure; E has v(a2)=1, v(a3)>=2, v(a4)>=3, v(a6)>=4."""
    nu = 1
    k = 2
    while True:
        # quadratic in Y at depth k
        A3, A6 = E.a3 // p ** k, E.a6 // p ** (2 * k)
        if (A3 * A3 + 4 * A6) % p:
            return n - 4 - nu
        tau = _quad_double_root(1, A3, -A6, p)
        E = _shift(E, t=p ** k * tau)
        nu += 1
        # quadratic in X: a2/p X^2 + a4/p^(k+1) X + a6/p^(2k+1)
        A2, A4, A6 = E.a2 // p, E.a4 // p ** (k + 1), E.a6 // p ** (2 * k + 1)
        if (A4 * A4 - 4 * A2 * A6) % p:
            return n - 4 - nu
        rho = _quad_double_root(A2, A4, A6, p)
        E = _shift(E, r=p ** k * rho)
        nu += 1
        k += 1


def bad_primes(E):
    Emin, _ = minimal_model(E)
    return sorted(sympy.factorint(abs(Emin.disc)).keys())


def reduction_kind(E, p):
    """(kind, f_p) at any prime, using full Tate below 5."""
    Emin, _ = minimal_model(E)
    if p > 3:
        rd = tate_reduction(Emin, p)
        return rd.kind, rd.f_p
    f, kind = conductor_exponent_small_prime(Emin, p)
    return kind, f


def conductor(E):
    Emin, _ = minimal_model(E)
    N = 1
    for p in bad_primes(Emin):
        _, f = reduction_kind(Emin, p)
        N *= p ** f
    return N


# ---------------------------------------------------------------------------
# point counts and Fourier coefficients


def _count_points_naive(E, p):
    if p == 2 or p == 3:
        cnt = 1
        for x in range(p):
            for y in range(p):
                if (y * y + E.a1 * x * y + E.a3 * y
                        - x ** 3 - E.a2 * x * x - E.a4 * x - E.a6) % p == 0:
                    cnt += 1
        return cnt
    A = (-27 * E.c4) % p
    B = (-54 * E.c6) % p
    return _count_points_short_numpy(A, B, p)


def _count_points_short_numpy(A, B, p):
    import numpy as np

    xs = np.arange(p, dtype=np.int64)
    rhs = (xs * xs % p * xs + A * xs + B) % p
    counts = np.zeros(p, dtype=np.int64)
    ys = np.arange(p, dtype=np.int64)
    np.add.at(counts, ys * ys % p, 1)
    return int(counts[rhs].sum()) + 1


def _ec_add_modp(P, Q, A, p):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + A) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    y3 = (lam * (x1 - x3) - y1) % p
    return (x3, y3)


def _ec_mul_modp(n, P, A, p):
    R = None
    Q = P
    if n < 0:
        n, Q = -n, (P[0], (-P[1]) % p)
    while n:
        if n & 1:
            R = _ec_add_modp(R, Q, A, p)
        Q = _ec_add_modp(Q, Q, A, p)
        n >>= 1
    return R


def _count_points_bsgs(A, B, p, rng=None):
    """#E(F_p) for y^2 = x^3 + Ax + B via baby-step giant-step order finding."""
    rng = rng or random.Random(1234567 + p)
    half_w = 2 * isqrt(p) + 1
    lo, hi = p + 1 - half_w, p + 1 + half_w
    L = 1  # lcm of point orders found so far
    for _ in range(40):
        # random point
        while True:
            x = rng.randrange(p)
            rhs = (x * x % p * x + A * x + B) % p
            if rhs == 0:
                P = (x, 0)
                break
            if pow(rhs, (p - 1) // 2, p) == 1:
                y = sympy.ntheory.residue_ntheory.sqrt_mod(rhs, p)
                P = (x, int(y))
                break
        m = _point_annihilator_bsgs(P, A, p, lo, hi)
        order = _reduce_to_order(P, m, A, p)
        L = L * order // gcd(L, order)
        k0 = (lo + L - 1) // L
        candidates = [k * L for k in range(k0, hi // L + 1)]
        if len(candidates) == 1:
            return candidates[0]
    raise ArithmeticError("BSGS order finding failed to converge")


def _point_annihilator_bsgs(P, A, p, lo, hi):
    s = isqrt(hi - lo) + 1
    baby = {}
    Q = None
    for j in range(s):
        if Q is not None:
            baby.setdefault(Q[0], []).append((j, Q[1]))
        else:
            baby.setdefault(None, []).append((j, None))
        Q = _ec_add_modp(Q, P, A, p)
    S = _ec_mul_modp(s, P, A, p)
    R = _ec_mul_modp(lo, P, A, p)
    for i in range(s + 2):
        key = None if R is None else R[0]
        if key in baby:
            for j, yj in baby[key]:
                if R is None and yj is None:
                    m = lo + i * s - j
                    if m > 0:
                        return m
                elif R is not None and yj is not None:
                    if R[1] == yj:
                        m = lo + i * s - j
                    else:
                        m = lo + i * s + j
                    if m > 0 and _ec_mul_modp(m, P, A, p) is None:
                        return m
        R = _ec_add_modp(R, S, A, p)
    raise ArithmeticError("BSGS found no annihilator in the Hasse interval")


def _reduce_to_order(P, m, A, p):
    for q in sympy.factorint(m):
        while m % q == 0 and _ec_mul_modp(m // q, P, A, p) is None:
            m //= q
    return m


AP_BSGS_THRESHOLD = 10 ** 4


def ap_good(E, p, method=None):
    """Trace of Frobenius at a prime of good reduction.

    Brute-force enumeration below AP_BSGS_THRESHOLD, order finding above
    (method in {"naive", "bsgs"} forces one path).
    """
    Emin, _ = minimal_model(E)
    if Emin.disc % p == 0:
        raise BadReduction("p = %d divides the minimal discriminant" % p)
    if p <= 3:
        return p + 1 - _count_points_naive(Emin, p)
    if method == "naive" or (method is None and p < AP_BSGS_THRESHOLD):
        return p + 1 - _count_points_naive(Emin, p)
    A = (-27 * Emin.c4) % p
    B = (-54 * Emin.c6) % p
    return p + 1 - _count_points_bsgs(A, B, p)


def an_coeffs(E, n_max):
    """Fourier coefficients a_1..a_n_max of the newform attached to E."""
    import numpy as np

    Emin, _ = minimal_model(E)
    a = [0] * (n_max + 1)
    if n_max >= 1:
        a[1] = 1
    if n_max < 2:
        return a
    # smallest prime factor sieve
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for p in range(2, n_max + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    bad = set(bad_primes(Emin))
    for p in range(2, n_max + 1):
        if spf[p] != p:
            continue
        if p in bad:
            kind, _ = reduction_kind(Emin, p)
            ap = {"SplitMult": 1, "NonsplitMult": -1}.get(kind, 0)
        else:
            ap = ap_good(Emin, p)
        q = p
        a[q] = ap
        # prime powers
        qk = p * p
        while qk <= n_max:
            if p in bad:
                a[qk] = a[qk // p] * ap
            else:
                a[qk] = ap * a[qk // p] - p * a[qk // (p * p)]
            qk *= p
    for n in range(2, n_max + 1):
        p = int(spf[n])
        q = p
        m = n // p
        while m % p == 0:
            q *= p
            m //= p
        if m > 1:
            a[n] = a[q] * a[m]
    return a


# ---------------------------------------------------------------------------
# quadratic twists


@dataclass(frozen=True)
class TwistMap:
    """Isomorphism E_D -> E over Q(sqrt(D)): x -> x/D, y -> y/D^(3/2) in the
    short models, conjugated by the exact model-to-short transforms."""

    source: CurveQ  # E_D (minimal)
    target: CurveQ  # E
    D: int
    src_to_short: Transform
    short_to_target: Transform

    def apply_numeric(self, x, y, prec=DEFAULT_PREC_BITS):
        with mp.workprec(prec + 10):
            x, y = as_mpc(x), as_mpc(y)
            xs, ys = _map_point_numeric(self.src_to_short, x, y)
            rD = mp.sqrt(mpc(self.D))
            xs, ys = xs / self.D, ys / (self.D * rD)
            return _map_point_numeric(self.short_to_target, xs, ys)

    def apply_exact(self, x, y, sqrtD):
        """Exact map for NFElt coordinates; sqrtD is a square root of D in
        the same field."""
        xs, ys = _map_point_exact(self.src_to_short, x, y)
        D = self.D
        xs = xs * Fraction(1, D)
        ys = ys * Fraction(1, D * D) * sqrtD
        return _map_point_exact(self.short_to_target, xs, ys)


def _map_point_numeric(T, x, y):
    u = Fraction(T.u)
    uu = mpf(u.numerator) / u.denominator
    r = mpf(T.r.numerator) / T.r.denominator
    s = mpf(T.s.numerator) / T.s.denominator
    t = mpf(T.t.numerator) / T.t.denominator
    xp = (x - r) / uu ** 2
    yp = (y - s * (x - r) - t) / uu ** 3
    return xp, yp


def _map_point_exact(T, x, y):
    xp = (x - T.r) * Fraction(T.u.denominator ** 2, T.u.numerator ** 2)
    yp = (y - (x - T.r) * T.s - T.t) * Fraction(T.u.denominator ** 3, T.u.numerator ** 3)
    return xp, yp


def quadratic_twist(E, D):
    """(E_D, phi) with E_D the quadratic twist by squarefree D != 0 and
    phi : E_D -> E the coordinate map over Q(sqrt(D))."""
    if D == 0 or not is_squarefree(D):
        raise ValueError("twist factor must be a nonzero squarefree integer")
    Emin, _ = minimal_model(E)
    big = CurveQ(0, 0, 0, -27 * Emin.c4 * D * D, -54 * Emin.c6 * D ** 3)
    ED, T_big_to_min = minimal_model(big)
    src_to_short = T_big_to_min.inverse()
    shortE = CurveQ(0, 0, 0, -27 * Emin.c4, -54 * Emin.c6)
    T_E_to_short = _connecting_transform(Emin, shortE, Fraction(1, 6))
    phi = TwistMap(ED, Emin, D, src_to_short, T_E_to_short.inverse())
    return ED, phi


# ---------------------------------------------------------------------------
# period lattices and uniformization


@lru_cache(maxsize=None)
def _curve_lattice_cached(ainvs, prec):
    E = CurveQ(*ainvs)
    with mp.workprec(prec + 40):
        c4 = mpf(E.c4)
        c6 = mpf(E.c6)
        roots = mp.polyroots([mpf(1), mpf(0), -c4 / 48, -c6 / 864],
                             maxsteps=200, extraprec=prec)
        roots = [mpc(r) for r in roots]
        from .mparith import agm as _agm

        candidates = []
        import itertools

        for perm in itertools.permutations(roots):
            e1, e2, e3 = perm
            try:
                m1 = _agm(mp.sqrt(e1 - e3), mp.sqrt(e1 - e2), prec + 20)
                m2 = _agm(mp.sqrt(e1 - e3), mp.sqrt(e2 - e3), prec + 20)
                if m1 == 0 or m2 == 0:
                    continue
                w2 = mp.pi / m1
                w1 = mp.pi * mpc(0, 1) / m2
            except (ArithmeticError, ValueError):
                continue
            for basis in ((w1, w2), ((w1 + w2) / 2, w2), (w1, (w1 + w2) / 2),
                          (w1 / 2, w2), (w1, w2 / 2), (2 * w1, w2), (w1, 2 * w2)):
                try:
                    L = lattice_reduce(Lattice2.make(basis[0], basis[1], prec))
                except Exception:
                    continue
                if _lattice_matches_curve(L, E, min(prec, bits_for_digits(25))):
                    candidates.append(L)
            if candidates:
                break
        if not candidates:
            raise ArithmeticError("period lattice construction failed")
        L = candidates[0]
        # prefer a basis whose second generator is the real period
        L = _realign_real_period(L, prec)
        return L


def _realign_real_period(L, prec):
    with mp.workprec(prec + 20):
        cands = [L.w1, L.w2, L.w1 + L.w2, L.w1 - L.w2]
        eps = mpf(2) ** (-prec // 2)
        real = [w for w in cands if abs(w.imag) < eps * abs(w)]
        if not real:
            return L
        w2 = min(real, key=lambda w: abs(w))
        w2 = mpc(abs(w2.real), 0)
        others = [L.w1, L.w2, L.w1 + L.w2, L.w1 - L.w2, L.w1 + 2 * L.w2]
        best = None
        for w1 in others:
            try:
                cand = Lattice2.make(w1, w2, prec)
            except Exception:
                continue
            if lattice_index(cand, L) == 1 and lattice_index(L, cand) == 1:
                im = abs((w1 / w2).imag)
                if best is None or im < best[0]:
                    best = (im, cand)
        return best[1] if best else L


def lattice_index(Lsub, Lsup):
    from .mparith import lattice_index as _li

    return _li(Lsub, Lsup)


def _lattice_matches_curve(L, E, probe_prec):
    """Eisenstein-series check: g2, g3 of the lattice match c4/12, c6/216."""
    with mp.workprec(probe_prec + 20):
        Lr = lattice_reduce(L)
        tau = Lr.w1 / Lr.w2
        if tau.imag < 0.5:
            return False
        q = mp.exp(2j * mp.pi * tau)
        n_terms = max(8, int(probe_prec / max(1e-9, -mp.log(abs(q), 2))) + 3)
        e4 = mpc(1)
        e6 = mpc(1)
        qn = mpc(1)
        for n in range(1, n_terms + 1):
            qn *= q
            s3 = sum(d ** 3 for d in sympy.divisors(n))
            s5 = sum(d ** 5 for d in sympy.divisors(n))
            e4 += 240 * s3 * qn
            e6 -= 504 * s5 * qn
        scale = 2 * mp.pi / Lr.w2
        g2 = scale ** 4 * e4 / 12
        g3 = scale ** 6 * e6 / 216
        tol = mpf(2) ** (-probe_prec // 2)
        ok2 = abs(g2 - mpf(E.c4) / 12) < tol * max(1, abs(g2))
        ok3 = abs(g3 - mpf(E.c6) / 216) < tol * max(1, abs(g3))
        return bool(ok2 and ok3)


def curve_lattice(E, digits=100):
    """Period lattice of the model; g2(L) = c4/12, g3(L) = c6/216."""
    Emin = E  # lattice belongs to the model itself, no minimalization
    return _curve_lattice_cached(Emin.ainvs, bits_for_digits(digits))


def elliptic_exp(E, z, digits=100, lattice=None):
    """Image of z under C/L -> E(C); None for the point at infinity."""
    prec = bits_for_digits(digits)
    L = lattice if lattice is not None else curve_lattice(E, digits)
    with mp.workprec(prec + 30):
        Lr = lattice_reduce(L)
        zr, _, _ = lattice_reduce_mod(Lr, as_mpc(z), centered=True)
        x, y = lattice_coordinates(Lr, zr)
        if max(abs(x), abs(y)) < mpf(2) ** (-prec // 2):
            return None
        tau = Lr.w1 / Lr.w2
        q = mp.exp(2j * mp.pi * tau)
        u = mp.exp(2j * mp.pi * (zr / Lr.w2))
        X, Y = _tate_xy(u, q, prec)
        kappa = 2j * mp.pi / Lr.w2
        wp = kappa ** 2 * (X + mpf(1) / 12)
        wpp = kappa ** 3 * (2 * Y + X)
        xm = wp - mpf(E.b2) / 12
        ym = (wpp - E.a1 * xm - E.a3) / 2
        return +xm, +ym


def _qseries_terms(q, prec):
    # |q|^(n - 1/2) < 2^-(prec+15) guarantees the tail is negligible even
    # after the u-shift |u| <= |q|^(-1/2)
    lq = -mp.log(abs(q), 2)
    return int((prec + 15) / lq) + 2


def _tate_xy(u, q, prec):
    X = u / (1 - u) ** 2
    Y = u * u / (1 - u) ** 3
    qn = mpc(1)
    for n in range(1, _qseries_terms(q, prec) + 1):
        qn *= q
        a = qn * u
        b = qn / u
        X += a / (1 - a) ** 2 + b / (1 - b) ** 2 - 2 * n * qn / (1 - qn)
        Y += a * a / (1 - a) ** 3 - b / (1 - b) ** 3 + n * qn / (1 - qn)
    return X, Y


def elliptic_log(E, x, y, digits=100, lattice=None):
    """z with elliptic_exp(E, z) = (x, y), reduced modulo the lattice."""
    prec = bits_for_digits(digits)
    L0 = lattice if lattice is not None else curve_lattice(E, digits)
    with mp.workprec(prec + 30):
        L = lattice_reduce(L0)
        x, y = as_mpc(x), as_mpc(y)
        tau = L.w1 / L.w2
        q = mp.exp(2j * mp.pi * tau)
        Xt = (x + mpf(E.b2) / 12) / (2j * mp.pi / L.w2) ** 2 - mpf(1) / 12
        Wt = (2 * y + E.a1 * x + E.a3) / (2j * mp.pi / L.w2) ** 3
        # 2-torsion first: Newton has a critical point there
        for zc in (L.w1 / 2, L.w2 / 2, (L.w1 + L.w2) / 2):
            pt = elliptic_exp(E, zc, digits, lattice=L)
            if (pt is not None
                    and abs(pt[0] - x) < mpf(2) ** (-prec // 2) * max(1, abs(x))
                    and abs(pt[1] - y) < mpf(2) ** (-prec // 2) * max(1, abs(y))):
                zr, _, _ = lattice_reduce_mod(L, zc)
                return +zr
        # multistart Newton over a coarse grid of the fundamental cell
        grid = 12
        starts = []
        for i in range(grid):
            for jj in range(grid):
                a = mpf(2 * i + 1) / (2 * grid) - mpf(1) / 2
                b = mpf(2 * jj + 1) / (2 * grid)
                u = mp.exp(2j * mp.pi * (a * tau + b))
                X, _ = _tate_xy(u, q, 60)
                starts.append((abs(X - Xt), u))
        starts.sort(key=lambda s: s[0])
        for _, u0 in starts[:6]:
            u = u0
            ok = False
            for _ in range(prec):
                X, Y = _tate_xy(u, q, prec)
                f = X - Xt
                if abs(f) < mpf(2) ** (-prec + 10) * max(1, abs(Xt)):
                    ok = True
                    break
                dX = _tate_dx(u, q, prec)
                if dX == 0:
                    break
                step = f / dX
                # damp wild steps to stay in the annulus of convergence
                if abs(step) > abs(u) / 2:
                    step *= abs(u) / (2 * abs(step))
                u = u - step
            if not ok:
                continue
            X, Y = _tate_xy(u, q, prec)
            W = 2 * Y + X
            if abs(W - Wt) > abs(W + Wt):
                u = 1 / u
                X, Y = _tate_xy(u, q, prec)
                W = 2 * Y + X
            if abs(W - Wt) < mpf(2) ** (-prec // 2) * max(1, abs(Wt), abs(W)):
                z = L.w2 * mp.log(u) / (2j * mp.pi)
                zr, _, _ = lattice_reduce_mod(L, z)
                return +zr
        raise ArithmeticError("elliptic logarithm did not converge")


def _tate_dx(u, q, prec):
    dX = (1 + u) / (1 - u) ** 3
    qn = mpc(1)
    for _ in range(1, _qseries_terms(q, prec) + 1):
        qn *= q
        a = qn * u
        b = qn / u
        dX += qn * (1 + a) / (1 - a) ** 3 - (b / u) * (1 + b) / (1 - b) ** 3
    return dX


# ---------------------------------------------------------------------------
# exact points over number fields


@dataclass(frozen=True)
class AlgebraicPoint:
    curve: CurveQ
    field: NumberField
    x: NFElt
    y: NFElt

    def __post_init__(self):
        if not self.on_curve():
            raise ValueError("point does not satisfy the curve equation")

    def on_curve(self):
        E = self.curve
        x, y = self.x, self.y
        lhs = y * y + E.a1 * (x * y) + E.a3 * y
        rhs = x * x * x + E.a2 * (x * x) + E.a4 * x + E.a6
        return (lhs - rhs).is_zero()

    def embed(self, prec=None, root=None):
        return self.x.embed(prec, root=root), self.y.embed(prec, root=root)

    def neg(self):
        E = self.curve
        return AlgebraicPoint(E, self.field, self.x,
                              -self.y - E.a1 * self.x - self.field.element([E.a3]))

    def add(self, other):
        E = self.curve
        if other is None:
            return self
        one = self.field
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        if (x1 - x2).is_zero():
            ysum = y1 + y2 + E.a1 * x1 + one.element([E.a3])
            if ysum.is_zero():
                return None  # P + (-P)
            lam = (3 * (x1 * x1) + 2 * E.a2 * x1 + one.element([E.a4])
                   - E.a1 * y1) / (2 * y1 + E.a1 * x1 + one.element([E.a3]))
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam + E.a1 * lam - one.element([E.a2]) - x1 - x2
        y3 = lam * (x1 - x3) - y1 - E.a1 * x3 - one.element([E.a3])
        return AlgebraicPoint(E, self.field, x3, y3)

    def mul(self, n):
        if n == 0:
            return None
        if n < 0:
            return self.neg().mul(-n)
        R = None
        Q = self
        while n:
            if n & 1 and Q is not None:
                R = Q if R is None else R.add(Q)
            n >>= 1
            if n and Q is not None:
                Q = Q.add(Q)
        return R

    def order_at_most(self, bound=24):
        """Exact order if <= bound, else None."""
        R = self
        for n in range(2, bound + 1):
            R = R.add(self)
            if R is None:
                return n
        return None


def point_from_rationals(E, x, y):
    F = NumberField.rationals()
    return AlgebraicPoint(E, F, F.element([Fraction(x)]), F.element([Fraction(y)]))


def is_torsion(P, bound=24):
    return P.order_at_most(bound) is not None


def canonical_height(P, max_n=6, prec_digits=60):
    """Canonical height via exact torsion certificate + doubling limit.

    h(x(2^n P))/4^n with one Richardson step; accuracy ~C/4^max_n, plenty
    for the 1e-4 non-torsion certificates used here.
    """
    if is_torsion(P):
        return PrecReal.make(0, bits_for_digits(prec_digits))
    prec = bits_for_digits(prec_digits)
    with mp.workprec(prec):
        Q = P
        prev = None
        est = None
        for n in range(1, max_n + 1):
            Q2 = Q.add(Q)
            if Q2 is None:
                return PrecReal.make(0, prec)
            Q = Q2
            h = Q.x.global_height(prec) / mpf(4) ** n
            if prev is not None:
                est = h + (h - prev) / 3
                if abs(h - prev) < mpf("1e-5"):
                    break
            prev = h
        return PrecReal(+est if est is not None else +prev, prec)
