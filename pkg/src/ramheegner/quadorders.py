"""Imaginary quadratic orders: binary quadratic forms, class groups,
Heegner data adapted to a level, Galois translation, and the real
(genus) characters used for traces.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import gcd, isqrt, lcm

import sympy
from mpmath import mp, mpf, mpc

from .arith import kronecker


class NoHeegnerPoint(ValueError):
    """Structured failure: the Heegner condition has no solution."""


def _crt2(r1, m1, r2, m2):
    s = sympy.ntheory.modular.solve_congruence((r1, m1), (r2, m2))
    return None if s is None else int(s[0])


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class QuadOrder:
    dK: int  # negative fundamental discriminant
    c: int = 1

    def __post_init__(self):
        if self.dK >= 0 or self.dK % 4 not in (0, 1):
            raise ValueError("dK must be a negative discriminant")
        if self.c < 1:
            raise ValueError("conductor must be >= 1")

    @property
    def D(self):
        return self.c * self.c * self.dK


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    cc: int

    def __post_init__(self):
        if self.disc >= 0:
            raise ValueError("discriminant must be negative")
        if self.a <= 0:
            raise ValueError("form must be positive definite")

    @property
    def disc(self):
        return self.b * self.b - 4 * self.a * self.cc

    def is_primitive(self):
        return gcd(gcd(self.a, self.b), self.cc) == 1

    def value(self, x, y):
        return self.a * x * x + self.b * x * y + self.cc * y * y

    def tau(self, prec=None):
        """Root (-b + sqrt(disc))/(2a) in the upper half plane."""
        from .mparith import DEFAULT_PREC_BITS

        prec = prec or DEFAULT_PREC_BITS
        with mp.workprec(prec):
            return (-self.b + mp.sqrt(mpc(self.disc))) / (2 * self.a)

    def __iter__(self):
        return iter((self.a, self.b, self.cc))


def reduce_form(f):
    a, b, c = f.a, f.b, f.cc
    while True:
        if c < a:
            a, b, c = c, -b, a
        if -a < b <= a:
            if a == c and b < 0:
                b = -b
            return QuadForm(a, b, c)
        r = b % (2 * a)
        if r > a:
            r -= 2 * a
        k = (b - r) // (2 * a)
        c = c - k * (b + r) // 2
        b = r


def principal_form(D):
    k = D % 2
    return QuadForm(1, k, (k * k - D) // 4)


def _united_representative(f, coprime_to):
    """Form (A, B, *) equivalent to f with gcd(A, coprime_to) = 1."""
    for bound in (4, 8, 16, 32, 64):
        for x in range(0, bound + 1):
            for y in range(-bound, bound + 1):
                if gcd(x, y) != 1:
                    continue
                A = f.value(x, y)
                if A <= 0 or gcd(A, coprime_to) != 1:
                    continue
                g, alpha, beta = _xgcd(x, y)
                u0, v0 = -beta, alpha
                assert x * v0 - y * u0 == 1
                B = 2 * (f.a * x * u0 + f.cc * y * v0) + f.b * (x * v0 + y * u0)
                return A, B
    raise ArithmeticError("no representative coprime to %d" % coprime_to)


def compose_forms(f, g):
    """Composition of primitive forms of the same discriminant via
    concordant ('united') representatives."""
    if f.disc != g.disc:
        raise ValueError("discriminants differ")
    D = f.disc
    a1, b1 = f.a, f.b
    A2, B2 = _united_representative(g, 2 * a1 * D)
    B = _crt2(b1, 2 * a1, B2, 2 * A2)
    if B is None:
        raise ArithmeticError("concordance congruence failed")
    A = a1 * A2
    B %= 2 * A
    if (B * B - D) % (4 * A):
        raise ArithmeticError("composite form not integral")
    return reduce_form(QuadForm(A, B, (B * B - D) // (4 * A)))


@dataclass(frozen=True)
class ClassGroupTable:
    D: int
    forms: tuple        # reduced forms, index = element id
    mult: tuple         # mult[i][j] = index of product
    inverse: tuple
    identity: int
    generators: tuple   # (element index, order) pairs, cyclic decomposition
    coords: tuple       # coords[i] = exponent tuple over the generators

    @property
    def h(self):
        return len(self.forms)

    def index_of(self, form):
        return self.forms.index(reduce_form(form))

    def power(self, i, n):
        r = self.identity
        base = i
        n = int(n)
        if n < 0:
            base = self.inverse[i]
            n = -n
        while n:
            if n & 1:
                r = self.mult[r][base]
            base = self.mult[base][base]
            n >>= 1
        return r

    def order_of(self, i):
        n = 1
        cur = i
        while cur != self.identity:
            cur = self.mult[cur][i]
            n += 1
        return n


def reduced_forms(D):
    """Class group of discriminant D: all reduced primitive forms (by
    exhaustive |b| <= a <= sqrt(|D|/3) enumeration) plus composition data."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("invalid negative discriminant")
    forms = []
    amax = isqrt(-D // 3) + 1
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            ff = QuadForm(a, b, c)
            if ff.is_primitive():
                forms.append(ff)
    forms.sort(key=lambda t: (t.a, t.b, t.cc))
    idx = {t: i for i, t in enumerate(forms)}
    h = len(forms)
    mult = [[0] * h for _ in range(h)]
    for i in range(h):
        for j in range(i, h):
            p = compose_forms(forms[i], forms[j])
            mult[i][j] = mult[j][i] = idx[p]
    ident = idx[reduce_form(principal_form(D))]
    inv = tuple(idx[reduce_form(QuadForm(t.a, -t.b, t.cc))] for t in forms)
    gens, coords = _cyclic_decomposition(h, mult, ident)
    return ClassGroupTable(D, tuple(forms), tuple(map(tuple, mult)), inv,
                           ident, tuple(gens), tuple(coords))


def _cyclic_decomposition(h, mult, ident):
    if h == 1:
        return [], [()]
    subgroup = {ident}
    gens = []
    while len(subgroup) < h:
        best = None
        for i in range(h):
            if i in subgroup:
                continue
            n = 1
            cur = i
            while cur not in subgroup:
                cur = mult[cur][i]
                n += 1
            if best is None or n > best[1]:
                best = (i, n)
        g, n = best
        gens.append((g, n))
        new = set()
        for s in subgroup:
            cur = s
            for _ in range(n):
                new.add(cur)
                cur = mult[cur][g]
        subgroup = new
    coords = [None] * h
    ranges = [range(n) for (_, n) in gens]
    for combo in iproduct(*ranges):
        cur = ident
        for (g, _), x in zip(gens, combo):
            for _ in range(x):
                cur = mult[cur][g]
        if coords[cur] is None:
            coords[cur] = combo
    if any(c is None for c in coords):
        raise ArithmeticError("cyclic decomposition does not span")
    return gens, coords


@dataclass(frozen=True)
class AnticycChar:
    """Class group character by exponents on the cyclic generators."""

    table: ClassGroupTable
    exponents: tuple

    def log_value(self, i):
        """k in Q/Z with chi(class i) = exp(2 pi i k)."""
        f = Fraction(0)
        for (g, n), e, x in zip(self.table.generators, self.exponents,
                                self.table.coords[i]):
            f += Fraction(e * x, n)
        return f % 1

    def value(self, i, prec=None):
        from .mparith import DEFAULT_PREC_BITS

        f = self.log_value(i)
        prec = prec or DEFAULT_PREC_BITS
        with mp.workprec(prec):
            return mp.exp(2j * mp.pi * mpf(f.numerator) / f.denominator)

    def sign_value(self, i):
        f = self.log_value(i)
        if f == 0:
            return 1
        if f == Fraction(1, 2):
            return -1
        raise ValueError("character is not real at this class")

    def is_real(self):
        return all(self.log_value(i) in (Fraction(0), Fraction(1, 2))
                   for i in range(self.table.h))

    def order(self):
        o = 1
        for (_, n), e in zip(self.table.generators, self.exponents):
            if e:
                o = lcm(o, n // gcd(n, e))
        return o


def trivial_character(table):
    return AnticycChar(table, tuple(0 for _ in table.generators))


def all_characters(table):
    ranges = [range(n) for (_, n) in table.generators]
    return [AnticycChar(table, combo) for combo in iproduct(*ranges)]


def genus_characters(table):
    """All real characters (values +-1), trivial one first."""
    out = [chi for chi in all_characters(table) if chi.is_real()]
    out.sort(key=lambda chi: sum(chi.exponents))
    return out


def genus_character_value(D, d1, form):
    """Genus character attached to D = d1 * (D/d1), evaluated on a form:
    (d1 | r) for any represented value r coprime to D."""
    for bound in (6, 12, 24, 48):
        for x in range(0, bound + 1):
            for y in range(-bound, bound + 1):
                r = form.value(x, y)
                if r != 0 and gcd(r, D) == 1:
                    return kronecker(d1, r)
    raise ArithmeticError("no represented value coprime to D found")


# ---------------------------------------------------------------------------
# Heegner data


def heegner_square_root(D, N):
    """Smallest beta >= 0 with beta^2 = D mod 4N (None if no root)."""
    target = D % (4 * N)
    roots = sympy.ntheory.residue_ntheory.sqrt_mod(target, 4 * N, all_roots=True)
    if not roots:
        return None
    return min(int(r) % (2 * N) for r in roots)


@dataclass(frozen=True)
class HeegnerDatum:
    form: QuadForm  # N | a, b = beta mod 2N
    level: int
    class_index: int

    def tau(self, prec=None):
        return self.form.tau(prec)


def heegner_data(order, N, table=None, beta=None):
    """A level-N Heegner form in every ideal class (keys: class indices)."""
    D = order.D
    if beta is None:
        beta = heegner_square_root(D, N)
    if beta is None:
        raise NoHeegnerPoint("no square root of D modulo 4N")
    if table is None:
        table = reduced_forms(D)
    out = {}
    for i, f in enumerate(table.forms):
        A, B0 = _united_representative(f, 2 * N * D)
        B = _crt2(B0, 2 * A, beta, 2 * N)
        if B is None:
            raise ArithmeticError("concordance congruence failed")
        AN = A * N
        B %= 2 * AN
        if (B * B - D) % (4 * AN):
            raise ArithmeticError("composite Heegner form not integral")
        comp = QuadForm(AN, B, (B * B - D) // (4 * AN))
        cls = table.index_of(comp)
        out[cls] = HeegnerDatum(comp, N, cls)
    if len(out) != table.h:
        raise ArithmeticError("Heegner data does not cover the class group")
    return out


def galois_translate(datum, cls_index, table, data_map):
    """Datum of the class [a] * [b]^{-1} (action of Frob_b on Heegner data)."""
    target = table.mult[datum.class_index][table.inverse[cls_index]]
    return data_map[target]
