import random

import pytest

import ribetjac as rj
from ribetjac.elliptic_curve import INFINITY, CurveSpec
from ribetjac.finite_field import FieldSpec, mult_order, factorize


def brute_count(p, a4, a6):
    """Independent enumeration oracle: direct quadratic-residue counting."""
    squares = {}
    for y in range(p):
        squares.setdefault((y * y) % p, []).append(y)
    count = 1
    for x in range(p):
        rhs = (x**3 + a4 * x + a6) % p
        count += len(squares.get(rhs, []))
    return count


def test_rejects_singular_curve(f13):
    with pytest.raises(ValueError):
        CurveSpec(f13, 0, 0)


def test_rejects_small_characteristic():
    with pytest.raises(ValueError):
        CurveSpec(FieldSpec(3), 1, 1)


def test_enumeration_matches_brute_force(f13, curve13):
    assert curve13.group_order() == brute_count(13, 1, 0) == 20
    # spot-check a couple of other curves
    for a4, a6 in ((2, 3), (0, 1), (5, 5)):
        c = CurveSpec(f13, a4, a6)
        assert c.group_order() == brute_count(13, a4, a6)


def test_hasse_window(curve13):
    n = curve13.group_order()
    assert 14 - 2 * 13**0.5 <= n <= 14 + 2 * 13**0.5


def test_all_enumerated_points_on_curve(curve13):
    pts = list(curve13.points())
    assert pts[0] is INFINITY
    assert all(curve13.is_on_curve(P) for P in pts)
    assert len(set(pts)) == len(pts)


def test_identity_and_inverse(curve13):
    P = curve13.points()[5]
    assert curve13.add(P, INFINITY) == P
    assert curve13.add(P, curve13.neg(P)).is_infinity
    assert curve13.neg(INFINITY).is_infinity


def test_add_rejects_off_curve_points(curve13, f13):
    bogus = rj.CurvePoint(f13(1), f13(1))
    with pytest.raises(rj.PointNotOnCurve):
        curve13.add(bogus, INFINITY)
    with pytest.raises(rj.PointNotOnCurve):
        curve13.scalar_mul(2, bogus)
    with pytest.raises(rj.PointNotOnCurve):
        curve13.point(1, 1)


def test_exhaustive_associativity_small(curve13):
    pts = list(curve13.points())
    assert len(pts) <= 300
    for P in pts:
        for Q in pts:
            for R in pts:
                assert curve13._add(curve13._add(P, Q), R) == \
                    curve13._add(P, curve13._add(Q, R))


def test_associativity_sample_larger(curve13_4):
    rng = random.Random(7)
    table = curve13_4.points()
    pts = [table[rng.randrange(len(table))] for _ in range(30)]
    for P in pts:
        for Q in pts:
            for R in pts:
                assert curve13_4._add(curve13_4._add(P, Q), R) == \
                    curve13_4._add(P, curve13_4._add(Q, R))


def test_scalar_mul_matches_repeated_addition(curve13):
    rng = random.Random(11)
    table = curve13.points()
    for _ in range(50):
        k = rng.randrange(0, 21)
        P = table[rng.randrange(len(table))]
        acc = INFINITY
        for _ in range(k):
            acc = curve13._add(acc, P)
        assert curve13.scalar_mul(k, P) == acc
        assert curve13.scalar_mul(-k, P) == curve13.neg(acc)
    assert curve13.scalar_mul(0, table[3]).is_infinity
    assert curve13.scalar_mul(1, table[3]) == table[3]


def test_lagrange(curve13):
    n = curve13.group_order()
    for P in curve13.points():
        assert curve13._scalar(n, P).is_infinity


def test_point_order(curve13):
    assert curve13.point_order(INFINITY) == 1
    n = curve13.group_order()
    for P in curve13.points():
        d = curve13.point_order(P)
        assert n % d == 0
        assert curve13._scalar(d, P).is_infinity
        for ell, _ in factorize(d):
            assert not curve13._scalar(d // ell, P).is_infinity
    # a 2-torsion point has y = 0
    two = [P for P in curve13.points()
           if not P.is_infinity and P.y.is_zero()]
    assert all(curve13.point_order(P) == 2 for P in two)
    assert len(two) == 3  # full 2-torsion: x^3 + x splits over F_13


def test_find_points_of_order_against_full_scan(curve13):
    assert curve13.find_points_of_order(1) == [INFINITY]
    for n in (2, 3, 4, 5, 10, 20):
        expected = sorted(
            (P for P in curve13.points() if curve13.point_order(P) == n),
            key=rj.CurvePoint.key)
        assert curve13.find_points_of_order(n) == expected


def test_find_points_of_order_full_scan_13_4(curve13_4):
    """Exhaustive oracle on the 28800-point group."""
    by_check = []
    for P in curve13_4.points():
        if P.is_infinity:
            continue
        if curve13_4._scalar(5, P).is_infinity:
            by_check.append(P)
    by_check.sort(key=rj.CurvePoint.key)
    got = curve13_4.find_points_of_order(5)
    assert got == by_check
    assert len(got) == 24  # full E[5] minus O


def test_order_counts_follow_group_shape(curve13_4):
    st = curve13_4.structure()
    assert (st.d1, st.d2) == (120, 240)
    assert st.d1 * st.d2 == curve13_4.group_order()
    assert (13**4 - 1) % st.d1 == 0
    assert len(curve13_4.find_points_of_order(3)) == 8
    assert len(curve13_4.find_points_of_order(15)) == 192
    assert curve13_4.count_torsion(15) == 225
    # phi(n)-family structure
    for n in (3, 5, 15):
        pts = curve13_4.find_points_of_order(n)
        from math import gcd
        phi = sum(1 for k in range(1, n) if gcd(k, n) == 1)
        assert len(pts) % phi == 0


def test_torsion_subgroup_divides_n_squared(curve13, curve13_4):
    for curve, n in ((curve13, 5), (curve13, 4), (curve13_4, 5),
                     (curve13_4, 3)):
        cnt = curve.count_torsion(n)
        assert (n * n) % cnt == 0


def test_torsion_basis(curve13_4, curve13):
    assert curve13_4.torsion_basis(1) == (INFINITY, INFINITY)
    P1, P2 = curve13_4.torsion_basis(5)
    w = rj.weil_pairing(curve13_4, 5, P1, P2)
    assert mult_order(w) == 5
    with pytest.raises(rj.FullTorsionNotRational):
        curve13.torsion_basis(5)  # E[5] over F_13 is only cyclic
    with pytest.raises(rj.CharacteristicDividesN):
        curve13_4.torsion_basis(13)


def test_enumeration_too_large():
    spec = FieldSpec(13, 4)
    c = CurveSpec(spec, 1, 0, max_size=1000)
    with pytest.raises(rj.FieldTooLarge):
        c.points()


def test_parse_curve(f13):
    c = rj.parse_curve("1,0", f13)
    assert c.a4 == f13(1) and c.a6 == f13(0)
    with pytest.raises(ValueError):
        rj.parse_curve("1;0", f13)
