import random

import pytest

import ribetjac as rj
from ribetjac.cm import Endo, parse_endo
from ribetjac.divisor import Divisor


def test_gaussian_root_and_action(gauss13, curve13):
    i = gauss13.root
    assert i * i == curve13.field(-1)
    assert i == curve13.field(5)  # smallest of the two roots
    for P in curve13.points():
        Q = gauss13.iota(P)
        assert curve13.is_on_curve(Q)
        # iota^2 = -1
        assert gauss13.iota(Q) == curve13.neg(P)
        if not P.is_infinity:
            assert Q.x == -P.x and Q.y == i * P.y


def test_eisenstein_root_and_action(eis13):
    curve = eis13.curve
    z = eis13.root
    one = curve.field.one
    assert z * z + z + one == curve.field.zero
    assert z ** 3 == one and z != one
    for P in curve.points():
        Q = eis13.iota(P)
        assert curve.is_on_curve(Q)
        # iota^2 + iota + 1 = 0 as an endomorphism
        triple = curve._add(curve._add(eis13.iota(Q), Q), P)
        assert triple.is_infinity


def test_kind_curve_shape_mismatch(curve13, eis13):
    with pytest.raises(ValueError):
        rj.CMStructure(curve13, rj.EISENSTEIN)
    with pytest.raises(ValueError):
        rj.CMStructure(eis13.curve, rj.GAUSSIAN)


def test_endo_degree_dual_trace():
    u = Endo(2, 3, rj.GAUSSIAN)
    assert u.degree() == 13
    assert u.dual() == Endo(2, -3, rj.GAUSSIAN)
    assert u.trace() == 4
    assert (u * u.dual()) == Endo(13, 0, rj.GAUSSIAN)
    v = Endo(2, 3, rj.EISENSTEIN)
    assert v.degree() == 4 - 6 + 9  # m^2 - mn + n^2
    assert v.dual() == Endo(-1, -3, rj.EISENSTEIN)
    assert v.trace() == 1
    assert (v * v.dual()) == Endo(v.degree(), 0, rj.EISENSTEIN)
    assert Endo(0, 1, rj.GAUSSIAN).degree() == 1
    assert Endo(2, 0, rj.GAUSSIAN).degree() == 4
    assert Endo(1, 1, rj.GAUSSIAN).degree() == 2


def test_endo_ring_relations():
    i = Endo(0, 1, rj.GAUSSIAN)
    assert i * i == Endo(-1, 0, rj.GAUSSIAN)
    z = Endo(0, 1, rj.EISENSTEIN)
    assert z * z + z + 1 == Endo(0, 0, rj.EISENSTEIN)
    rng = random.Random(3)
    for _ in range(20):
        for kind in (rj.GAUSSIAN, rj.EISENSTEIN):
            u = Endo(rng.randrange(-4, 5), rng.randrange(-4, 5), kind)
            v = Endo(rng.randrange(-4, 5), rng.randrange(-4, 5), kind)
            assert (u * v).degree() == u.degree() * v.degree()
            assert (u + u.dual()).n == 0 and (u + u.dual()).m == u.trace()


def test_parse_endo():
    assert parse_endo("1+2*i", rj.GAUSSIAN) == Endo(1, 2, rj.GAUSSIAN)
    assert parse_endo("i", rj.GAUSSIAN) == Endo(0, 1, rj.GAUSSIAN)
    assert parse_endo("-i", rj.GAUSSIAN) == Endo(0, -1, rj.GAUSSIAN)
    assert parse_endo("3", rj.GAUSSIAN) == Endo(3, 0, rj.GAUSSIAN)
    assert parse_endo("2-1*zeta", rj.EISENSTEIN) == Endo(2, -1, rj.EISENSTEIN)
    with pytest.raises(ValueError):
        parse_endo("1+2*zeta", rj.GAUSSIAN)
    with pytest.raises(ValueError):
        parse_endo("nonsense*", rj.GAUSSIAN)


def test_apply_identities(gauss13, curve13):
    rng = random.Random(5)
    table = curve13.points()
    ident = gauss13.endo(1, 0)
    for _ in range(50):
        P = table[rng.randrange(len(table))]
        assert gauss13.apply(ident, P) == P
        for u in (gauss13.endo(0, 1), gauss13.endo(1, 1),
                  gauss13.endo(2, 0), gauss13.endo(2, 1)):
            du = u.dual()
            assert gauss13.apply(du, gauss13.apply(u, P)) == \
                curve13._scalar(u.degree(), P)
            lhs = curve13._add(gauss13.apply(u, P), gauss13.apply(du, P))
            assert lhs == curve13._scalar(u.trace(), P)


def test_kernels(gauss13, curve13):
    assert gauss13.kernel(gauss13.endo(1, 0)) == [rj.INFINITY]
    assert gauss13.kernel(gauss13.endo(0, 1)) == [rj.INFINITY]
    k2 = gauss13.kernel(gauss13.endo(2, 0))
    assert len(k2) == 4  # full 2-torsion over F_13
    k11 = gauss13.kernel(gauss13.endo(1, 1))
    assert len(k11) == 2
    assert all(gauss13.apply(gauss13.endo(1, 1), P).is_infinity for P in k11)
    with pytest.raises(rj.ZeroEndomorphism):
        gauss13.kernel(gauss13.endo(0, 0))


def test_kernel_count_matches_degree_when_rational(gauss13_4):
    curve = gauss13_4.curve
    for u in (gauss13_4.endo(0, 1), gauss13_4.endo(1, 1),
              gauss13_4.endo(2, 0), gauss13_4.endo(2, 1),
              gauss13_4.endo(2, -1), gauss13_4.endo(3, 0)):
        d = u.degree()
        if curve.count_torsion(d) == d * d:  # rationality guard
            assert len(gauss13_4.kernel(u)) == d


def test_pullback_pushforward(gauss13, curve13):
    q = curve13.find_points_of_order(5)[0]
    D = Divisor(curve13, [(q, 1), (curve13.neg(q), -1)])
    one = gauss13.endo(1, 0)
    iota = gauss13.endo(0, 1)
    assert gauss13.pullback(one, D) == D
    assert gauss13.pushforward(one, D) == D
    # iota is an automorphism: pushforward is plain relabeling
    push = gauss13.pushforward(iota, D)
    assert push == Divisor(curve13, [
        (gauss13.iota(q), 1), (gauss13.iota(curve13.neg(q)), -1)])
    for u in (iota, gauss13.endo(1, 1), gauss13.endo(2, 0)):
        pull = gauss13.pullback(u, D)
        assert pull.degree == u.degree() * D.degree
        assert gauss13.pushforward(u, pull) == u.degree() * D
        # sum over a full fiber pair: pullback of (S)-(-S) sums to 2*dual(S)
        S = q
        DS = Divisor(curve13, [(S, 1), (curve13.neg(S), -1)])
        total = gauss13.pullback(u, DS).sum_point()
        assert total == curve13._scalar(2, gauss13.apply(u.dual(), S))
    with pytest.raises(rj.ZeroEndomorphism):
        gauss13.pullback(gauss13.endo(0, 0), D)


def test_pushforward_respects_class_map(gauss13, curve13):
    rng = random.Random(9)
    table = curve13.points()
    for _ in range(20):
        pts = [table[rng.randrange(len(table))] for _ in range(3)]
        D = Divisor(curve13, [(pts[0], 2), (pts[1], -1), (pts[2], 3)])
        for u in (gauss13.endo(0, 1), gauss13.endo(1, 1)):
            assert gauss13.pushforward(u, D).sum_point() == \
                gauss13.apply(u, D.sum_point())
            assert gauss13.pushforward(u, D).degree == D.degree


def test_preimage_not_rational(gauss13, curve13, gauss13_4):
    # over F_13 the image of a degree-5 endomorphism on rational points has
    # index 5, so the order-5 point q has no rational preimage at all
    q = curve13.find_points_of_order(5)[0]
    D = Divisor(curve13, [(q, 1), (curve13.neg(q), -1)])
    for u in (gauss13.endo(2, 1), gauss13.endo(2, -1)):
        with pytest.raises(rj.PreimageNotRational):
            gauss13.pullback(u, D)
    # over F_13^4 both conjugate kernels are rational (E[5] is full), so
    # fibers over image points carry exactly deg(u) = 5 points
    curve4 = gauss13_4.curve
    u = gauss13_4.endo(2, 1)
    T = curve4.find_points_of_order(15)[0]
    S = gauss13_4.apply(u, T)
    DS = Divisor(curve4, [(S, 1), (curve4.neg(S), -1)])
    pull = gauss13_4.pullback(u, DS)
    assert pull.degree == 0
    assert pull.multiplicity(T) == 1
    assert len(gauss13_4.preimages(u, S)) == 5
