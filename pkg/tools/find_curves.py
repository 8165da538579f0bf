#!/usr/bin/env python3
"""Locate the minimal Weierstrass models used by the regression fixtures.

Each target is pinned by its conductor together with rational or quadratic
points known to lie on it (plus local filters: potential multiplicativity,
ramified-prime Frobenius traces).  The reduced-coefficient search space
(a1 in {0,1}, a2 in {-1,0,1}, a3 in {0,1}) contains every minimal model
exactly once, so a hit plus uniqueness identifies the curve.

Writes src/ramheegner/data/curves.txt.
"""

import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from ramheegner.arith import valuation
from ramheegner.elliptic import CurveQ, conductor, minimal_model, quadratic_twist

# point = (x, (yr, yi, d)) meaning y = yr + yi*sqrt(d)
TARGETS = [
    {
        "label": "725.a1",
        "conductor": 725,
        "points": [
            (Fraction(8), (Fraction(8), Fraction(0), 1)),
            (Fraction(9), (Fraction(-9, 2), Fraction(15, 2), 5)),
        ],
        "potmult_at": 5,
        "twist_conductor": (5, 145),
    },
    {
        "label": "575.e1",
        "conductor": 575,
        "points": [
            (Fraction(-1637, 64), (Fraction(-1, 2), Fraction(-9525, 512), -5)),
        ],
        "frob_trace": (5, 4, 4),  # (p, e, trace t with a_p = (t + i sqrt(4p-t^2))/2)
    },
    {
        "label": "196.b2",
        "conductor": 196,
        "points": [
            (Fraction(-139, 4), (Fraction(0), Fraction(581, 8), -7)),
        ],
        "frob_trace": (7, 3, -5),
    },
    {
        "label": "882.a1",
        "conductor": 882,
        "points": [
            (Fraction(39), (Fraction(15), Fraction(0), 1)),
        ],
        "frob_trace": (7, 3, -1),
    },
    {
        "label": "1225.d2",
        "conductor": 1225,
        "points": [
            (Fraction(-15), (Fraction(15, 2), Fraction(175, 2), -35)),
        ],
        "frob_trace": (7, 3, 1),
        "frob_trace2": (5, 4, 2),
    },
]

A4_RANGE = 4000


def point_constraints_ok(a1, a3, pt):
    x, (yr, yi, d) = pt
    if yi != 0:
        return 2 * yr + a1 * x + a3 == 0
    return True


def solve_a6(a1, a2, a3, a4, pt):
    x, (yr, yi, d) = pt
    lhs = yr * yr + d * yi * yi + a1 * x * yr + a3 * yr
    a6 = lhs - x ** 3 - a2 * x * x - a4 * x
    return a6 if a6.denominator == 1 else None


def on_curve(E, pt):
    x, (yr, yi, d) = pt
    lhs_r = yr * yr + d * yi * yi + E.a1 * x * yr + E.a3 * yr
    lhs_i = yi * (2 * yr + E.a1 * x + E.a3)
    rhs = x ** 3 + E.a2 * x * x + E.a4 * x + E.a6
    return lhs_r == rhs and lhs_i == 0


def disc_supported(n, primes):
    n = abs(n)
    for p in primes:
        while n % p == 0:
            n //= p
    return n == 1


def ramified_frobenius_trace(E, p, e):
    """Trace of Frobenius on the good reduction over the degree-e totally
    ramified extension (reduced model y^2 = x^3 + Ax or + B)."""
    v = valuation(E.disc, p)
    k, ok = divmod(v * e, 12)
    if ok:
        return None
    if e == 4:
        if valuation(E.c4, p) != k:
            return None
        A = (E.c4 // p ** k * pow(-48, -1, p)) % p
        cnt = 1 + sum(1 for x in range(p) for y in range(p)
                      if (y * y - x ** 3 - A * x) % p == 0)
        return p + 1 - cnt
    if e in (3, 6):
        shift = 2 * k if e == 3 else k
        if valuation(E.c6, p) != shift:
            return None
        B = (E.c6 // p ** shift * pow(-864, -1, p)) % p
        cnt = 1 + sum(1 for x in range(p) for y in range(p)
                      if (y * y - x ** 3 - B) % p == 0)
        return p + 1 - cnt
    return None


def search(target):
    N = target["conductor"]
    primes = sorted(set(i for i in range(2, N + 1) if N % i == 0
                        and all(i % j for j in range(2, i))))
    hits = []
    pts = target["points"]
    for a1 in (0, 1):
        for a3 in (0, 1):
            if not all(point_constraints_ok(a1, a3, p) for p in pts):
                continue
            for a2 in (-1, 0, 1):
                for a4 in range(-A4_RANGE, A4_RANGE + 1):
                    a6 = solve_a6(a1, a2, a3, Fraction(a4), pts[0])
                    if a6 is None:
                        continue
                    try:
                        E = CurveQ(a1, a2, a3, a4, int(a6))
                    except ValueError:
                        continue
                    if not disc_supported(E.disc, primes):
                        continue
                    Emin, _ = minimal_model(E)
                    if Emin.ainvs != E.ainvs:
                        continue
                    if not all(on_curve(E, p) for p in pts):
                        continue
                    if conductor(E) != N:
                        continue
                    if not extra_filters(E, target):
                        continue
                    hits.append(E)
    return hits


def extra_filters(E, target):
    if "potmult_at" in target:
        p = target["potmult_at"]
        if valuation(E.j, p) >= 0:
            return False
    if "twist_conductor" in target:
        p, Nt = target["twist_conductor"]
        pstar = p if p % 4 == 1 else -p
        ED, _ = quadratic_twist(E, pstar)
        if conductor(ED) != Nt:
            return False
    for key in ("frob_trace", "frob_trace2"):
        if key in target:
            p, e, t = target[key]
            if ramified_frobenius_trace(E, p, e) != t:
                return False
    return True


def find_rank_one_control(N=61):
    """Small-coefficient curve of conductor N with a small rational point."""
    found = []
    for a1 in (0, 1):
        for a2 in (-1, 0, 1):
            for a3 in (0, 1):
                for a4 in range(-10, 11):
                    for a6 in range(-20, 21):
                        try:
                            E = CurveQ(a1, a2, a3, a4, a6)
                        except ValueError:
                            continue
                        if abs(E.disc) % N or not disc_supported(E.disc, [N]):
                            continue
                        Emin, _ = minimal_model(E)
                        if Emin.ainvs != E.ainvs or conductor(E) != N:
                            continue
                        found.append(E)
    return found


def small_point(E, bound=40):
    for xd in (1, 2, 3, 4):
        for xn in range(-bound * xd * xd, bound * xd * xd + 1):
            x = Fraction(xn, xd * xd)
            rhs = x ** 3 + E.a2 * x * x + E.a4 * x + E.a6
            disc = (E.a1 * x + E.a3) ** 2 + 4 * rhs
            if disc < 0:
                continue
            num = disc.numerator * disc.denominator
            from math import isqrt

            r = isqrt(num)
            if r * r != num:
                continue
            s = Fraction(r, disc.denominator)
            y = (-(E.a1 * x + E.a3) + s) / 2
            return x, y
    return None


def main():
    lines = []
    for t in TARGETS:
        hits = search(t)
        print(t["label"], "->", [h.ainvs for h in hits])
        assert len(hits) == 1, "ambiguous or missing model for %s" % t["label"]
        E = hits[0]
        lines.append("%s %d %d %d %d %d" % (t["label"], *E.ainvs))
    # controls with classically documented models, verified by conductor here
    controls = [("37.a1", CurveQ(0, 0, 1, -1, 0), 37),
                ("11.a3", CurveQ(0, -1, 1, 0, 0), 11)]
    for label, E, N in controls:
        assert conductor(E) == N
        lines.append("%s %d %d %d %d %d" % (label, *E.ainvs))
    for E in find_rank_one_control(61):
        pt = small_point(E)
        print("61 control", E.ainvs, "point", pt)
        lines.append("%s %d %d %d %d %d" % ("61.a1", *E.ainvs))
    out = os.path.join(os.path.dirname(__file__), "..", "src", "ramheegner",
                       "data", "curves.txt")
    os.makedirs(os.path.dirname(out), exist_ok=True)
    with open(out, "w") as f:
        f.write("# label a1 a2 a3 a4 a6\n")
        f.write("\n".join(lines) + "\n")
    print("wrote", out)


if __name__ == "__main__":
    main()
