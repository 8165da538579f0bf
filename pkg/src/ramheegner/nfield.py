"""Exact arithmetic in number fields given by an integer minimal polynomial
with a distinguished complex root.

Elements are vectors in the power basis of theta with Fraction coordinates.
This is all the field theory the constructions need: degrees stay <= 8,
so dense polynomial arithmetic and cofactor determinants are fine.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import sympy
from mpmath import mp, mpf, mpc

from .mparith import (DEFAULT_PREC_BITS, NoRelationFound, as_mpc,
                      digits_for_bits, find_integer_relation, find_min_poly)


# ---------------------------------------------------------------------------
# dense polynomials over Fraction, constant term first


def poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(p, q):
    n = max(len(p), len(q))
    return poly_trim([
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    ])


def poly_mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly_trim(out)


def poly_divmod(p, q):
    p = list(p)
    if not q:
        raise ZeroDivisionError
    out = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    inv = Fraction(1) / q[-1]
    for i in range(len(p) - len(q), -1, -1):
        c = p[i + len(q) - 1] * inv
        out[i] = c
        if c:
            for j, b in enumerate(q):
                p[i + j] -= c * b
    return poly_trim(out), poly_trim(p)


def poly_xgcd(p, q):
    """(g, u, v) with u*p + v*q = g."""
    r0, r1 = list(p), list(q)
    u0, u1 = [Fraction(1)], []
    v0, v1 = [], [Fraction(1)]
    while r1:
        qq, rr = poly_divmod(r0, r1)
        r0, r1 = r1, rr
        u0, u1 = u1, poly_add(u0, [-c for c in poly_mul(qq, u1)])
        v0, v1 = v1, poly_add(v0, [-c for c in poly_mul(qq, v1)])
    return r0, u0, v0


class NotInField(ValueError):
    pass


@dataclass(frozen=True)
class NumberField:
    """Q(theta) for theta a root of an irreducible primitive integer polynomial.

    `min_poly` has constant term first and positive leading coefficient;
    `embedding` is the distinguished complex root.
    """

    min_poly: tuple
    embedding: mpc
    prec: int = DEFAULT_PREC_BITS

    @property
    def degree(self):
        return len(self.min_poly) - 1

    @classmethod
    def rationals(cls):
        return cls((0, 1), mpc(0), DEFAULT_PREC_BITS)

    @classmethod
    def from_poly(cls, coeffs, approx_root, prec=DEFAULT_PREC_BITS, check=True):
        coeffs = tuple(int(c) for c in coeffs)
        if check and len(coeffs) > 2:
            x = sympy.Symbol("x")
            poly = sympy.Poly(list(reversed(coeffs)), x)
            if not poly.is_irreducible:
                raise ValueError("min_poly is reducible: %s" % (coeffs,))
        root = _polish_root(coeffs, approx_root, prec)
        return cls(coeffs, root, prec)

    @classmethod
    def quadratic(cls, d, prec=DEFAULT_PREC_BITS):
        """Q(sqrt(d)) for a non-square integer d, embedding sqrt(d) in the
        upper half plane / positive reals."""
        with mp.workprec(prec):
            r = mp.sqrt(mpc(d))
        return cls((-d, 0, 1), r, prec)

    def theta(self):
        return self.element([0, 1] if self.degree > 1 else [0])

    def element(self, coords):
        coords = [Fraction(c) for c in coords]
        if len(coords) > self.degree:
            coords = _reduce_coords(coords, self.min_poly)
        coords += [Fraction(0)] * (self.degree - len(coords))
        return NFElt(self, tuple(coords))

    def zero(self):
        return self.element([0])

    def one(self):
        return self.element([1])

    def roots(self, prec=None):
        """All complex roots of min_poly, distinguished embedding first."""
        prec = prec or self.prec
        with mp.workprec(prec + 20):
            rs = mp.polyroots([mpf(c) for c in reversed(self.min_poly)],
                              maxsteps=200, extraprec=prec)
            rs = [mpc(r) for r in rs]
            rs.sort(key=lambda r: abs(r - self.embedding))
        return rs

    def __repr__(self):
        return "NumberField(%s)" % (self.min_poly,)


def _polish_root(coeffs, approx, prec):
    d = len(coeffs) - 1
    if d <= 1:
        with mp.workprec(prec):
            return mpc(Fraction(-coeffs[0], coeffs[1]))
    with mp.workprec(prec + 30):
        z = mpc(approx)
        dcoeffs = [i * coeffs[i] for i in range(1, d + 1)]
        for _ in range(200):
            f = _horner(coeffs, z)
            fp = _horner(dcoeffs, z)
            if fp == 0:
                break
            step = f / fp
            z = z - step
            if abs(step) < mpf(2) ** (-prec - 10) * max(1, abs(z)):
                break
        if abs(_horner(coeffs, z)) > mpf(2) ** (-prec // 2):
            raise ValueError("could not polish root to target precision")
        return +z


def _horner(coeffs, z):
    acc = mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _reduce_coords(coords, min_poly):
    d = len(min_poly) - 1
    lead = Fraction(min_poly[-1])
    # theta^d = -(c_0 + ... + c_{d-1} theta^{d-1}) / c_d
    top = [Fraction(-c) / lead for c in min_poly[:-1]]
    coords = [Fraction(c) for c in coords]
    while len(coords) > d:
        c = coords.pop()
        if c:
            k = len(coords) - d  # power above theta^{d-1} ... shift
            for i, t in enumerate(top):
                coords[k + i] += c * t
    return coords


@dataclass(frozen=True)
class NFElt:
    field: NumberField
    coords: tuple

    def __add__(self, other):
        other = self._coerce(other)
        return NFElt(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        other = self._coerce(other)
        return NFElt(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return NFElt(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        other = self._coerce(other)
        prod = poly_mul(list(self.coords), list(other.coords))
        return self.field.element(prod)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.field.min_poly == other.field.min_poly and self.coords == other.coords

    def __hash__(self):
        return hash((self.field.min_poly, self.coords))

    def _coerce(self, other):
        if isinstance(other, NFElt):
            if other.field.min_poly != self.field.min_poly:
                raise ValueError("mixed fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element([Fraction(other)])
        raise TypeError("cannot coerce %r" % (other,))

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_rational(self):
        return all(c == 0 for c in self.coords[1:])

    def rational_value(self):
        if not self.is_rational():
            raise NotInField("element is not rational")
        return self.coords[0]

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("number field zero division")
        m = [Fraction(c) for c in self.field.min_poly]
        g, u, _ = poly_xgcd(list(self.coords), m)
        if len(g) != 1:
            raise ZeroDivisionError("element not invertible (reducible modulus?)")
        inv = [c / g[0] for c in u]
        return self.field.element(inv)

    def embed(self, prec=None, root=None):
        prec = prec or self.field.prec
        with mp.workprec(prec + 10):
            th = root if root is not None else self.field.embedding
            acc = mpc(0)
            for c in reversed(self.coords):
                acc = acc * th + mpf(c.numerator) / c.denominator
            return +acc

    def conjugates(self, prec=None):
        """Images under all complex embeddings (distinguished first)."""
        return [self.embed(prec, root=r) for r in self.field.roots(prec)]

    def charpoly(self):
        """Characteristic polynomial of multiplication, integer-primitive,
        constant first, positive leading coefficient."""
        d = self.field.degree
        if d == 1:
            q = self.coords[0]
            return (-q.numerator, q.denominator) if q.denominator > 0 else (q.numerator, -q.denominator)
        # multiplication matrix columns: x * theta^j in power basis
        cols = []
        cur = list(self.coords)
        for _ in range(d):
            cols.append(list(cur) + [Fraction(0)] * (d - len(cur)))
            cur = _reduce_coords([Fraction(0)] + list(cur), self.field.min_poly)
        # charpoly det(T I - M) by cofactor expansion on polynomials in T
        M = [[cols[j][i] for j in range(d)] for i in range(d)]
        P = [[[-M[i][j]] for j in range(d)] for i in range(d)]
        for i in range(d):
            P[i][i] = poly_add(P[i][i], [Fraction(0), Fraction(1)])
        cp = _poly_det(P)
        den = 1
        for c in cp:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in cp]
        g = 0
        for c in ints:
            g = gcd(g, abs(c))
        ints = [c // g for c in ints]
        if ints[-1] < 0:
            ints = [-c for c in ints]
        return tuple(ints)

    def global_height(self, prec=80):
        """Absolute logarithmic Weil height via Mahler measure of charpoly."""
        cp = self.charpoly()
        deg = len(cp) - 1
        if deg == 0:
            return mpf(0)
        with mp.workprec(prec):
            if deg == 1:
                num, den = abs(cp[0]), abs(cp[1])
                g = gcd(num, den) or 1
                return mp.log(max(num // g, den // g, 1))
            roots = mp.polyroots([mpf(c) for c in reversed(cp)], maxsteps=300,
                                 extraprec=120)
            h = mp.log(abs(cp[-1]))
            for r in roots:
                ar = abs(r)
                if ar > 1:
                    h += mp.log(ar)
            return h / deg

    def __repr__(self):
        return "NFElt(%s)" % (self.coords,)


def _poly_det(P):
    n = len(P)
    if n == 1:
        return P[0][0]
    out = []
    for j in range(n):
        minor = [[P[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = poly_mul(P[0][j], _poly_det(minor))
        if j % 2:
            term = [-c for c in term]
        out = poly_add(out, term)
    return out


# ---------------------------------------------------------------------------
# recognition helpers


def express_in_field(z, field, prec=None, max_den=None):
    """Write a complex number as an exact element of `field`, or raise.

    Integer relation among [1, theta, ..., theta^(d-1), z]; the result is
    verified numerically to half the working precision.
    """
    prec = prec or field.prec
    if field.degree == 1:
        q = recognize_rational(z, prec, max_den=max_den)
        return field.element([q])
    with mp.workprec(prec + 20):
        th = field.embedding
        vals = [mpc(1)]
        for _ in range(field.degree - 1):
            vals.append(vals[-1] * th)
        vals.append(as_mpc(z))
        rel = find_integer_relation(vals, prec=prec)
        if rel is None or rel[-1] == 0:
            raise NotInField("no expression of value in field")
        den = -rel[-1]
        elt = field.element([Fraction(c, den) for c in rel[:-1]])
        err = abs(elt.embed(prec) - as_mpc(z))
        scale = max(abs(as_mpc(z)), mpf(1))
        if err > scale * mpf(2) ** (-(prec // 2)):
            raise NotInField("relation failed verification")
        return elt


def recognize_rational(z, prec=DEFAULT_PREC_BITS, max_den=None):
    z = as_mpc(z)
    with mp.workprec(prec):
        if abs(z.imag) > mpf(2) ** (-(prec // 2)) * max(1, abs(z)):
            raise NotInField("value is not real")
        x = z.real
        p, q = _best_rational(x, prec, max_den)
        if q == 0:
            raise NotInField("no rational approximation")
        err = abs(x - mpf(p) / q)
        if err > mpf(2) ** (-(prec // 2)) * max(1, abs(x)):
            raise NotInField("no rational of moderate height")
        return Fraction(p, q)


def _best_rational(x, prec, max_den=None):
    """Continued fraction convergent with denominator below the noise floor."""
    if max_den is None:
        max_den = int(mpf(2) ** (prec // 3))
    p0, q0, p1, q1 = 0, 1, 1, 0
    y = mpf(x)
    for _ in range(prec):
        a = int(mp.floor(y))
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > max_den:
            return p0, q0
        frac = y - a
        if frac == 0 or abs(frac) < mpf(2) ** (-prec + 8) * max(1, abs(y)):
            return p1, q1
        y = 1 / frac
    return p1, q1


def field_sqrt(elt, prec=None):
    """Square root of elt inside its own field, or None."""
    field = elt.field
    prec = prec or field.prec
    with mp.workprec(prec + 10):
        target = mp.sqrt(elt.embed(prec))
        targets = [target, -target]
    for t in targets:
        try:
            cand = express_in_field(t, field, prec)
        except NotInField:
            continue
        if (cand * cand - elt).is_zero():
            return cand
    return None


def recognize_algebraic(z, max_deg, prec=DEFAULT_PREC_BITS, height_bound=None):
    """NumberField + NFElt for a complex number of degree <= max_deg.

    The min_poly candidate is factored over Q and the factor vanishing at z
    is kept, so the field polynomial is irreducible.
    """
    res = find_min_poly(z, max_deg, height_bound=height_bound, prec=prec)
    coeffs = list(res.coeffs)
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(coeffs)), x)
    zv = as_mpc(z)
    best = None
    with mp.workprec(prec + 20):
        for fac, _ in poly.factor_list()[1]:
            fc = [int(c) for c in reversed(fac.all_coeffs())]
            err = abs(_horner(fc, zv))
            if best is None or err < best[1]:
                best = (fc, err)
        fc, err = best
        tol = mpf(10) ** (-(digits_for_bits(prec) // 2))
        if err > tol * max(1, abs(zv)) ** (len(fc) - 1):
            raise NoRelationFound("reducible candidate does not vanish at input")
    if len(fc) == 2:
        field = NumberField.rationals()
        return field, field.element([Fraction(-fc[0], fc[1])])
    field = NumberField.from_poly(fc, zv, prec=prec, check=False)
    return field, field.theta()
