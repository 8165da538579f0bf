"""Arbitrary-precision arithmetic, 2D complex lattices, and integer relations.

Values carry their working precision explicitly (bits).  mpmath supplies the
underlying big-float arithmetic; the lattice reduction used for algebraic
recognition (algdep-style) is implemented here because it needs the two
real/imaginary columns of a complex input, which PSLQ does not provide.

All operations are pure; nothing here mutates global mpmath state except
inside `with mp.workprec(...)` blocks.
"""

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf, mpc

DEFAULT_PREC_BITS = 332  # ~100 decimal digits


class DegenerateLattice(ValueError):
    pass


class NoRelationFound(ValueError):
    pass


def bits_for_digits(digits):
    return int(digits * 3.3219280948873626) + 10


def digits_for_bits(bits):
    return int(bits / 3.3219280948873626)


_FZERO = mpf(0)._mpf_


def as_mpc(z):
    """Coerce ints, Fractions, floats, mpf/mpc and PrecComplex to mpc.

    Existing mpf/mpc values are wrapped exactly (no rounding to the ambient
    precision); other types are converted at the current working precision,
    so convert them inside the intended workprec block.
    """
    if isinstance(z, PrecComplex):
        return z.value
    if isinstance(z, PrecReal):
        z = z.value
    if hasattr(z, "_mpc_"):
        return z
    if hasattr(z, "_mpf_"):
        return mp.make_mpc((z._mpf_, _FZERO))
    if isinstance(z, Fraction):
        return mpc(mpf(z.numerator) / z.denominator)
    return mpc(z)


@dataclass(frozen=True)
class PrecReal:
    value: mpf
    prec: int = DEFAULT_PREC_BITS

    @classmethod
    def make(cls, x, prec=DEFAULT_PREC_BITS):
        with mp.workprec(prec):
            if isinstance(x, Fraction):
                v = mpf(x.numerator) / x.denominator
            else:
                v = mpf(x)
        return cls(v, prec)

    def _binop(self, other, op):
        if not isinstance(other, PrecReal):
            other = PrecReal.make(other, self.prec)
        prec = min(self.prec, other.prec)
        with mp.workprec(prec):
            return PrecReal(op(self.value, other.value), prec)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __neg__(self):
        return PrecReal(-self.value, self.prec)

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return "PrecReal(%s, prec=%d)" % (mp.nstr(self.value, 20), self.prec)


@dataclass(frozen=True)
class PrecComplex:
    value: mpc
    prec: int = DEFAULT_PREC_BITS

    @classmethod
    def make(cls, z, prec=DEFAULT_PREC_BITS):
        with mp.workprec(prec):
            return cls(mpc(z), prec)

    @property
    def re(self):
        return PrecReal(self.value.real, self.prec)

    @property
    def im(self):
        return PrecReal(self.value.imag, self.prec)

    def _binop(self, other, op):
        if not isinstance(other, PrecComplex):
            other = PrecComplex.make(other, self.prec)
        prec = min(self.prec, other.prec)
        with mp.workprec(prec):
            return PrecComplex(op(self.value, other.value), prec)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __neg__(self):
        return PrecComplex(-self.value, self.prec)

    def __complex__(self):
        return complex(self.value)

    def __repr__(self):
        return "PrecComplex(%s, prec=%d)" % (mp.nstr(self.value, 20), self.prec)


# ---------------------------------------------------------------------------
# AGM


def agm(a, b, prec=DEFAULT_PREC_BITS):
    """Arithmetic-geometric mean with the 'right choice' square-root branch.

    At every step the geometric mean is the square root of a*b whose scalar
    product with the arithmetic mean has nonnegative real part (ties broken
    towards positive imaginary part of b1/a1).  Raises on non-convergence,
    which would signal a branch-choice failure.
    """
    wrap = isinstance(a, PrecComplex) or isinstance(b, PrecComplex)
    if wrap:
        prec = min(x.prec for x in (a, b) if isinstance(x, PrecComplex))
    with mp.workprec(prec + 20):
        x, y = as_mpc(a), as_mpc(b)
    if x == 0 or y == 0:
        raise ValueError("agm requires nonzero arguments")
    with mp.workprec(prec + 20):
        eps = mpf(2) ** (-prec - 5)
        max_iter = prec.bit_length() * 8 + 40
        for _ in range(max_iter):
            if abs(x - y) <= eps * abs(x):
                break
            am = (x + y) / 2
            gm = mp.sqrt(x * y)
            # right choice: Re(am * conj(gm)) >= 0
            s = (am * mp.conj(gm)).real
            if s < 0:
                gm = -gm
            elif s == 0 and (gm / am).imag < 0:
                gm = -gm
            x, y = am, gm
        else:
            raise ArithmeticError("agm failed to converge (branch choice?)")
        res = (x + y) / 2
    with mp.workprec(prec):
        res = +res
    return PrecComplex(res, prec) if wrap else res


# ---------------------------------------------------------------------------
# Exact LLL on integer row vectors


def _gram_schmidt(b):
    n = len(b)
    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar = [None] * n
    B = [Fraction(0)] * n
    for i in range(n):
        v = [Fraction(x) for x in b[i]]
        for j in range(i):
            if B[j] == 0:
                mu[i][j] = Fraction(0)
                continue
            mu[i][j] = Fraction(
                sum(Fraction(x) * y for x, y in zip(b[i], bstar[j])), 1
            ) / B[j]
            v = [vi - mu[i][j] * wj for vi, wj in zip(v, bstar[j])]
        bstar[i] = v
        B[i] = sum(x * x for x in v)
    return mu, B, bstar


def lll_reduce_rows(rows, delta=Fraction(3, 4)):
    """Exact LLL on a list of integer row vectors; returns reduced rows.

    Dimensions here are tiny (recognition degree + 2), so the textbook
    rational Gram-Schmidt bookkeeping is fast enough and avoids all
    floating-point soundness questions.
    """
    b = [list(map(int, r)) for r in rows]
    n = len(b)
    if n <= 1:
        return b
    mu, B, _ = _gram_schmidt(b)

    def size_reduce(k, j):
        q = mu[k][j]
        qn = (q.numerator * 2 + q.denominator) // (2 * q.denominator)  # round
        if qn != 0:
            b[k] = [x - qn * y for x, y in zip(b[k], b[j])]
            for i in range(j):
                mu[k][i] -= qn * mu[j][i]
            mu[k][j] -= qn

    k = 1
    while k < n:
        size_reduce(k, k - 1)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            for j in range(k - 2, -1, -1):
                size_reduce(k, j)
            k += 1
        else:
            # swap rows k-1, k and update GS data
            m = mu[k][k - 1]
            Bk = B[k] + m * m * B[k - 1]
            if Bk == 0:
                # both projections vanish: just swap
                b[k - 1], b[k] = b[k], b[k - 1]
                for j in range(k - 1):
                    mu[k - 1][j], mu[k][j] = mu[k][j], mu[k - 1][j]
                k = max(k - 1, 1)
                continue
            mu_new = m * B[k - 1] / Bk
            B[k] = B[k - 1] * B[k] / Bk
            B[k - 1] = Bk
            b[k - 1], b[k] = b[k], b[k - 1]
            for j in range(k - 1):
                mu[k - 1][j], mu[k][j] = mu[k][j], mu[k - 1][j]
            for i in range(k + 1, n):
                t = mu[i][k]
                mu[i][k] = mu[i][k - 1] - m * t
                mu[i][k - 1] = t + mu_new * mu[i][k]
            mu[k][k - 1] = mu_new
            k = max(k - 1, 1)
    return b


# ---------------------------------------------------------------------------
# Integer relations / algebraic recognition


@dataclass(frozen=True)
class MinPolyResult:
    coeffs: tuple  # integer coefficients, constant term first
    residual: PrecReal

    def degree(self):
        return len(self.coeffs) - 1


def _content_normalize(coeffs):
    from math import gcd

    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        return None
    g = 0
    for c in coeffs:
        g = gcd(g, abs(c))
    coeffs = [c // g for c in coeffs]
    if coeffs[-1] < 0:
        coeffs = [-c for c in coeffs]
    return tuple(coeffs)


def _poly_eval_abs(coeffs, z):
    acc = mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return abs(acc)


def find_relation_rows(values, scale):
    """Build the recognition lattice rows [e_k | round(C Re v_k), round(C Im v_k)]."""
    rows = []
    n = len(values)
    for k, v in enumerate(values):
        row = [0] * n
        row[k] = 1
        row.append(int(mp.nint(scale * v.real)))
        row.append(int(mp.nint(scale * v.imag)))
        rows.append(row)
    return rows


def find_integer_relation(values, prec=DEFAULT_PREC_BITS, guard_digits=10,
                          max_coeff=None):
    """Small integer vector c with sum(c_i * values_i) ~ 0, or None.

    values may be complex; the lattice carries both real and imaginary
    columns scaled by 10^(digits - guard_digits).
    """
    digits = digits_for_bits(prec)
    with mp.workprec(prec + 30):
        vals = [as_mpc(v) for v in values]
        scale = mpf(10) ** (digits - guard_digits)
        rows = find_relation_rows(vals, scale)
        red = lll_reduce_rows(rows)
        n = len(values)
        tol = mpf(10) ** (-digits // 2)
        best = None
        for r in red:
            c = r[:n]
            if all(x == 0 for x in c):
                continue
            if max_coeff is not None and max(abs(x) for x in c) > max_coeff:
                continue
            err = abs(sum(ci * vi for ci, vi in zip(c, vals)))
            denom = max(abs(v) for v in vals)
            if err <= tol * max(denom, 1):
                norm = sum(x * x for x in c)
                if best is None or norm < best[1]:
                    best = (c, norm)
        return list(best[0]) if best else None


def find_min_poly(z, max_deg, height_bound=None, prec=None):
    """Integer polynomial of degree <= max_deg vanishing at z.

    Lattice reduction on the rows [e_k | C*Re(z^k), C*Im(z^k)] with
    C = 10^(digits-10); the smallest degree admitting a relation wins.
    Residual threshold is 10^(-digits/2).  Raises NoRelationFound otherwise.
    """
    wrap = isinstance(z, PrecComplex)
    if prec is None:
        prec = z.prec if wrap else DEFAULT_PREC_BITS
    digits = digits_for_bits(prec)
    with mp.workprec(prec + 30):
        zv = as_mpc(z)
        scale = mpf(10) ** (digits - 10)
        tol = mpf(10) ** (-(digits // 2))
        powers = [mpc(1)]
        for _ in range(max_deg):
            powers.append(powers[-1] * zv)
        zsize = max(abs(zv), mpf(1))
        # a genuine relation of height H evaluates to ~H*10^-digits (pure
        # rounding); lattice artifacts sit at the noise floor H*10^(-digits+10),
        # so gate the residual against the candidate's own height as well
        noise_gate = mpf(10) ** (-digits + 6)
        for deg in range(1, max_deg + 1):
            rows = find_relation_rows(powers[: deg + 1], scale)
            red = lll_reduce_rows(rows)
            best = None
            for r in red:
                coeffs = _content_normalize(r[: deg + 1])
                if coeffs is None or len(coeffs) < 2:
                    continue
                if height_bound is not None and max(map(abs, coeffs)) > height_bound:
                    continue
                height = max(map(abs, coeffs))
                err = _poly_eval_abs(coeffs, zv)
                if err <= tol * zsize ** deg and err <= height * noise_gate * zsize ** deg:
                    if best is None or err < best[1]:
                        best = (coeffs, err)
            if best is not None:
                res = PrecReal(+best[1], prec)
                return MinPolyResult(best[0], res)
    raise NoRelationFound(
        "no integer polynomial of degree <= %d at %d digits" % (max_deg, digits)
    )


# ---------------------------------------------------------------------------
# 2D lattices


@dataclass(frozen=True)
class Lattice2:
    w1: mpc
    w2: mpc
    prec: int = DEFAULT_PREC_BITS

    @classmethod
    def make(cls, w1, w2, prec=DEFAULT_PREC_BITS):
        with mp.workprec(prec):
            w1, w2 = as_mpc(w1), as_mpc(w2)
            r = w1 / w2
            if abs(r.imag) < mpf(2) ** (-(prec // 4)):
                raise DegenerateLattice("generators are R-linearly dependent")
            if r.imag < 0:
                w2 = -w2
        return cls(w1, w2, prec)

    def tau(self):
        with mp.workprec(self.prec):
            return self.w1 / self.w2

    def covolume(self):
        with mp.workprec(self.prec):
            return abs((mp.conj(self.w2) * self.w1).imag)


def lattice_reduce(L):
    """Gauss-reduced basis: |w1| <= |w2|, |Re(w2/w1)| <= 1/2, same lattice."""
    w1, w2 = L.w1, L.w2
    with mp.workprec(L.prec + 10):
        if abs(w1) > abs(w2):
            w1, w2 = w2, w1
        for _ in range(10 * L.prec):
            n = mp.nint((w2 / w1).real)
            w2 = w2 - n * w1
            if abs(w2) >= abs(w1):
                break
            w1, w2 = w2, w1
        else:
            raise ArithmeticError("lattice reduction did not terminate")
        # enforce |Re(w2/w1)| <= 1/2 exactly-ish after the loop
        n = mp.nint((w2 / w1).real)
        w2 = w2 - n * w1
    return Lattice2.make(w1, w2, L.prec)


def lattice_coordinates(L, z):
    """Real (x, y) with z = x*w1 + y*w2."""
    with mp.workprec(L.prec + 10):
        z = as_mpc(z)
        det = (L.w1.real * L.w2.imag) - (L.w1.imag * L.w2.real)
        if det == 0:
            raise DegenerateLattice("zero determinant")
        x = (z.real * L.w2.imag - z.imag * L.w2.real) / det
        y = (L.w1.real * z.imag - L.w1.imag * z.real) / det
        return x, y


def lattice_reduce_mod(L, z, centered=False):
    """z minus the integer combination m*w1 + n*w2; coordinates in [0,1).

    With centered=True the representative has coordinates in [-1/2, 1/2).
    Returns (representative, m, n).
    """
    with mp.workprec(L.prec + 10):
        zc = as_mpc(z)
    x, y = lattice_coordinates(L, zc)
    with mp.workprec(L.prec + 10):
        if centered:
            m, n = int(mp.nint(x)), int(mp.nint(y))
        else:
            m, n = int(mp.floor(x)), int(mp.floor(y))
        r = zc - m * L.w1 - n * L.w2
    if isinstance(z, PrecComplex):
        return PrecComplex(r, min(L.prec, z.prec)), m, n
    return r, m, n


def lattice_contains(L, z, tol_bits=None):
    """Whether z is a lattice point to within 2^-tol_bits (default prec/2)."""
    if tol_bits is None:
        tol_bits = L.prec // 2
    x, y = lattice_coordinates(L, z)
    with mp.workprec(L.prec):
        eps = mpf(2) ** (-tol_bits)
        scale = max(abs(x), abs(y), mpf(1))
        return abs(x - mp.nint(x)) < eps * scale and abs(y - mp.nint(y)) < eps * scale


def lattice_index(Lsub, Lsup):
    """Index [Lsup : Lsub] as a rounded integer (raises if not near-integral)."""
    with mp.workprec(min(Lsub.prec, Lsup.prec)):
        r = Lsub.covolume() / Lsup.covolume()
        n = int(mp.nint(r))
        if n == 0 or abs(r - n) > mpf(1) / 512:
            raise ArithmeticError("lattices not commensurable at this precision: %s" % mp.nstr(r, 10))
        return n
