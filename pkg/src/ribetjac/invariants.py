"""Module-level invariant suites, runnable from the CLI and the tests.

Every check is deterministic: sampling uses a fixed-seed RNG over the
canonical element/point orderings, so the suite is reproducible bit for
bit on any machine.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .cm import CMStructure
from .divisor import Divisor
from .elliptic_curve import INFINITY, CurveSpec
from .errors import SupportCollision
from .finite_field import FieldSpec, mult_order
from .function_eval import function_with_divisor, weil_pairing, weil_reciprocity_check


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _random_elements(field: FieldSpec, rng, count, nonzero=False):
    out = []
    while len(out) < count:
        x = field.from_index(rng.randrange(field.size))
        if nonzero and x.is_zero():
            continue
        out.append(x)
    return out


def _random_points(curve: CurveSpec, rng, count, affine=False):
    table = curve.points()
    lo = 1 if affine else 0
    return [table[rng.randrange(lo, len(table))] for _ in range(count)]


def check_field_laws(field: FieldSpec, triples: int = 200) -> list[CheckResult]:
    rng = random.Random(101)
    ok_assoc = ok_dist = True
    for _ in range(triples):
        x, y, z = _random_elements(field, rng, 3)
        if (x + y) + z != x + (y + z) or (x * y) * z != x * (y * z):
            ok_assoc = False
        if x * (y + z) != x * y + x * z:
            ok_dist = False
    out = [CheckResult("field associativity", ok_assoc),
           CheckResult("field distributivity", ok_dist)]
    frob = all(x ** field.size == x
               for x in _random_elements(field, rng, 100))
    out.append(CheckResult("frobenius fixes the field", frob))
    ok_ord = True
    for x in _random_elements(field, rng, 20, nonzero=True):
        d = mult_order(x)
        if x ** d != field.one or (field.size - 1) % d != 0:
            ok_ord = False
        for ell, _ in field.order_factors():
            if d % ell == 0 and x ** (d // ell) == field.one:
                ok_ord = False
    out.append(CheckResult("multiplicative orders certified", ok_ord))
    return out


def check_curve_laws(curve: CurveSpec) -> list[CheckResult]:
    rng = random.Random(202)
    out = []
    n = curve.group_order()
    q = curve.field.size
    lo = q + 1 - 2 * int(q**0.5 + 1)
    hi = q + 1 + 2 * int(q**0.5 + 1)
    out.append(CheckResult("group order in Hasse window", lo <= n <= hi,
                           f"#E = {n}"))
    sample = (list(curve.points()) if n <= 300
              else _random_points(curve, rng, 30))
    ok = True
    for P in sample:
        for Q in sample:
            for R in sample:
                if curve._add(curve._add(P, Q), R) != \
                        curve._add(P, curve._add(Q, R)):
                    ok = False
    out.append(CheckResult("associativity", ok,
                           f"{len(sample)}^3 triples"))
    ok = True
    for _ in range(50):
        k = rng.randrange(0, 21)
        P = _random_points(curve, rng, 1)[0]
        acc = INFINITY
        for _ in range(k):
            acc = curve._add(acc, P)
        if acc != curve._scalar(k, P):
            ok = False
    out.append(CheckResult("scalar_mul matches repeated addition", ok))
    ok = all(curve.is_on_curve(P) for P in _random_points(curve, rng, 100))
    out.append(CheckResult("enumerated points lie on the curve", ok))
    return out


def check_endo_laws(cm: CMStructure) -> list[CheckResult]:
    rng = random.Random(303)
    curve = cm.curve
    out = []
    endos = [cm.endo(0, 1), cm.endo(1, 1), cm.endo(2, 0), cm.endo(2, 1)]
    ok_deg = ok_tr = True
    for u in endos:
        du = u.dual()
        for P in _random_points(curve, rng, 50):
            if cm.apply(du, cm.apply(u, P)) != curve._scalar(u.degree(), P):
                ok_deg = False
            two_sided = curve._add(cm.apply(u, P), cm.apply(du, P))
            if two_sided != curve._scalar(u.trace(), P):
                ok_tr = False
    out.append(CheckResult("dual(u)*u = deg(u) on points", ok_deg))
    out.append(CheckResult("u + dual(u) = trace on points", ok_tr))
    ok = True
    for _ in range(20):
        u = cm.endo(rng.randrange(-3, 4), rng.randrange(-3, 4))
        v = cm.endo(rng.randrange(-3, 4), rng.randrange(-3, 4))
        if (u * v).degree() != u.degree() * v.degree():
            ok = False
    out.append(CheckResult("degree is multiplicative", ok))
    return out


def check_divisor_laws(curve: CurveSpec) -> list[CheckResult]:
    rng = random.Random(404)
    ok = True
    for _ in range(50):
        pts1 = _random_points(curve, rng, 2)
        pts2 = _random_points(curve, rng, 2)
        d1 = Divisor(curve, [(pts1[0], rng.randrange(-3, 4)),
                             (pts1[1], rng.randrange(-3, 4))])
        d2 = Divisor(curve, [(pts2[0], rng.randrange(-3, 4)),
                             (pts2[1], rng.randrange(-3, 4))])
        c1, c2 = rng.randrange(-2, 3), rng.randrange(-2, 3)
        comb = c1 * d1 + c2 * d2
        if comb.degree != c1 * d1.degree + c2 * d2.degree:
            ok = False
        lhs = comb.sum_point()
        rhs = curve._add(curve._scalar(c1, d1.sum_point()),
                         curve._scalar(c2, d2.sum_point()))
        if lhs != rhs:
            ok = False
    return [CheckResult("divisor sum is a homomorphism to E", ok)]


def _random_principal(curve: CurveSpec, rng) -> Divisor:
    """A small nonzero principal divisor with support away from O.

    (P) + (Q) - (R) - (S) with S = P + Q - R is principal; keeping O out
    of the support lets two such divisors be support-disjoint, which the
    reciprocity checks need.
    """
    while True:
        P, Q, R = _random_points(curve, rng, 3, affine=True)
        S = curve._add(curve._add(P, Q), curve.neg(R))
        if S.is_infinity:
            continue
        D = Divisor(curve, [(P, 1), (Q, 1), (R, -1), (S, -1)])
        if not D.is_zero():
            return D


def check_function_laws(curve: CurveSpec, pairs: int = 200) -> list[CheckResult]:
    rng = random.Random(505)
    out = []
    ok = True
    for _ in range(50):
        D = _random_principal(curve, rng)
        prog = function_with_divisor(D)
        if prog.divisor() != D or not prog.divisor().is_principal():
            ok = False
    out.append(CheckResult("program divisors re-expand exactly", ok))
    ok = True
    checked = 0
    while checked < pairs:
        Df = _random_principal(curve, rng)
        Dg = _random_principal(curve, rng)
        if not Df.supports_disjoint(Dg):
            continue
        try:
            f = function_with_divisor(Df)
            g = function_with_divisor(Dg)
            if not weil_reciprocity_check(f, g):
                ok = False
            checked += 1
        except SupportCollision:
            continue
    out.append(CheckResult("weil reciprocity", ok, f"{pairs} pairs"))
    return out


def check_pairing_laws(curve: CurveSpec, ns=(3, 5, 7)) -> list[CheckResult]:
    out = []
    field = curve.field
    for n in ns:
        if n % field.p == 0 or curve.count_torsion(n) != n * n:
            out.append(CheckResult(f"pairing laws n={n}", True,
                                   "skipped: full torsion not rational"))
            continue
        P1, P2 = curve.torsion_basis(n)
        w = weil_pairing(curve, n, P1, P2)
        ok = mult_order(w) == n
        ok &= weil_pairing(curve, n, P1, P1) == field.one
        ok &= weil_pairing(curve, n, P2, P2) == field.one
        ok &= weil_pairing(curve, n, P1, INFINITY) == field.one
        s = curve._add(P1, P2)
        ok &= weil_pairing(curve, n, s, P2) == \
            weil_pairing(curve, n, P1, P2) * weil_pairing(curve, n, P2, P2)
        ok &= w ** n == field.one
        ok &= weil_pairing(curve, n, P2, P1) == w.inverse()
        out.append(CheckResult(f"pairing laws n={n}", ok))
    return out


def run_all(cm: CMStructure) -> list[CheckResult]:
    curve = cm.curve
    results = []
    results += check_field_laws(curve.field)
    results += check_curve_laws(curve)
    results += check_endo_laws(cm)
    results += check_divisor_laws(curve)
    results += check_function_laws(curve)
    results += check_pairing_laws(curve)
    return results
