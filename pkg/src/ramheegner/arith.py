"""Small integer-arithmetic helpers shared across modules."""

from fractions import Fraction
from math import gcd, isqrt

import sympy


def valuation(n, p):
    """p-adic valuation of a nonzero integer or Fraction."""
    if isinstance(n, Fraction):
        return valuation(n.numerator, p) - valuation(n.denominator, p)
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(int(n))
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def kronecker(a, n):
    """Kronecker symbol (a|n) for arbitrary integers."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    if n < 0:
        return (-1 if a < 0 else 1) * kronecker(a, -n)
    v = valuation(n, 2) if n % 2 == 0 else 0
    n >>= v
    if v and a % 2 == 0:
        return 0
    # (a|2)^v
    res = 1
    if v:
        r = a % 8
        if r in (3, 5):
            res = (-1) ** v
    # now n odd positive
    a %= n
    while a:
        va = 0
        while a % 2 == 0:
            a >>= 1
            va += 1
        if va % 2 and n % 8 in (3, 5):
            res = -res
        if a % 4 == 3 and n % 4 == 3:
            res = -res
        a, n = n % a, a
    return res if n == 1 else 0


def is_squarefree(n):
    n = abs(int(n))
    if n == 0:
        return False
    return all(e == 1 for e in sympy.factorint(n).values())


def squarefree_part(n):
    s = 1
    for p, e in sympy.factorint(abs(n)).items():
        if e % 2:
            s *= p
    return s if n > 0 else -s


def fundamental_discriminant(d):
    """Discriminant of Q(sqrt(d)) for a non-square integer d."""
    s = squarefree_part(d)
    return s if s % 4 == 1 else 4 * s


def primes_up_to(n):
    return list(sympy.primerange(2, n + 1))


def smallest_primitive_root(p):
    return int(sympy.primitive_root(p))


def sqrt_mod_prime_power(a, p, e):
    """All square roots of a modulo p^e (possibly empty), via sympy."""
    r = sympy.ntheory.residue_ntheory.sqrt_mod(a, p ** e, all_roots=True)
    return [] if r is None else [int(x) for x in r]


def crt(residues, moduli):
    from sympy.ntheory.modular import crt as _crt

    r = _crt(moduli, residues)
    if r is None:
        return None
    return int(r[0])


def round_half(q):
    """Nearest integer to a Fraction (half rounds towards +inf)."""
    return (2 * q.numerator + q.denominator) // (2 * q.denominator)


def isqrt_exact(n):
    r = isqrt(n)
    return r if r * r == n else None


def content(ints):
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    return g
