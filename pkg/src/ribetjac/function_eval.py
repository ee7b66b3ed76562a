"""Rational functions with prescribed divisors, norms, and the Weil pairing.

A function is represented as a product of explicit line functions (chords,
tangents, verticals) with integer exponents -- the output of a
chord-tangent reduction of its divisor.  The representation pins the
divisor exactly while leaving the usual scalar ambiguity, so only
scale-invariant quantities (ratios, pairings, reciprocity products) are
exposed downstream.

Values at the point at infinity: every line is monic of exact pole order
3 (chord) or 2 (vertical) in the uniformizer x/y, so a program whose pole
orders balance evaluates to exactly 1 at O.

Evaluation at a point where some individual line vanishes is reported as
SupportCollision; callers rebuild the program with a permuted reduction
order (a deterministic internal counter, never global randomness) and
retry, up to 8 times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cm import CMStructure, Endo
from .divisor import Divisor
from .elliptic_curve import INFINITY, CurvePoint, CurveSpec
from .errors import (
    CharacteristicDividesN,
    NotPrincipal,
    NotTorsion,
    PathDisagreement,
    SupportCollision,
    SupportsNotDisjoint,
)

RETRY_BUDGET = 8


@dataclass(frozen=True)
class Step:
    """One line factor: a chord through P and Q (tangent if P == Q) with
    slope lam and third zero `third` = -(P+Q), or a vertical x - x_P."""

    kind: str                     # "chord" | "vert"
    P: CurvePoint
    Q: CurvePoint = None
    lam: object = None
    third: CurvePoint = None
    exp: int = 1

    def value_at(self, T: CurvePoint):
        if self.kind == "vert":
            return T.x - self.P.x
        return (T.y - self.P.y) - self.lam * (T.x - self.P.x)

    def line_divisor(self, curve: CurveSpec) -> Divisor:
        if self.kind == "vert":
            return Divisor(curve, [(self.P, 1), (curve.neg(self.P), 1),
                                   (INFINITY, -2)])
        return Divisor(curve, [(self.P, 1), (self.Q, 1), (self.third, 1),
                               (INFINITY, -3)])

    def pole_order_at_infinity(self) -> int:
        return 2 if self.kind == "vert" else 3


class LineProgram:
    """An ordered product of line functions with exponents."""

    def __init__(self, curve: CurveSpec, steps, target: Divisor):
        self.curve = curve
        self.steps = tuple(steps)
        self.target = target

    def divisor(self) -> Divisor:
        """Re-expand the formal divisor of the product of lines."""
        acc = Divisor(self.curve)
        for s in self.steps:
            acc = acc + s.exp * s.line_divisor(self.curve)
        return acc

    def eval(self, T: CurvePoint):
        """Value at T; SupportCollision if any line vanishes at T."""
        field = self.curve.field
        if T.is_infinity:
            balance = sum(s.exp * s.pole_order_at_infinity() for s in self.steps)
            if balance != 0:
                raise SupportCollision("program has a zero or pole at O")
            return field.one
        num = field.one
        den = field.one
        for i, s in enumerate(self.steps):
            v = s.value_at(T)
            if v.is_zero():
                raise SupportCollision(f"line {i} vanishes at {T}", step=i)
            if s.exp > 0:
                num = num * v ** s.exp
            else:
                den = den * v ** (-s.exp)
        return num / den

    def eval_divisor(self, D: Divisor):
        """f(D) = prod f(P)^D(P); requires D disjoint from div(f)."""
        if not D.supports_disjoint(self.target):
            raise SupportsNotDisjoint("divisor meets the support of div(f)")
        acc = self.curve.field.one
        for P, m in D.items():
            acc = acc * self.eval(P) ** m
        return acc

    def __len__(self):
        return len(self.steps)

    def __repr__(self):
        parts = []
        for s in self.steps:
            if s.kind == "vert":
                parts.append(f"vert({s.P!r})^{s.exp}")
            else:
                parts.append(f"chord({s.P!r},{s.Q!r})^{s.exp}")
        return " * ".join(parts) if parts else "1"


def _pick_pair(side, work, seed, counter):
    """Deterministic, seed-permuted choice of two reduction slots.

    Distinct support points are preferred over tangents: chords between
    unrelated points place their third zero off any small subgroup the
    support may generate, which is what keeps evaluation collisions rare.
    """
    if len(side) == 1:
        return side[0], side[0]
    i = (seed * 7 + counter * 3) % len(side)
    j = (i + 1 + (seed + counter) % (len(side) - 1)) % len(side)
    if j == i:
        j = (i + 1) % len(side)
    return side[i], side[j]


def function_with_divisor(D: Divisor, seed: int = 0,
                          check: bool = False) -> LineProgram:
    """A line program whose formal divisor is exactly the principal D.

    Chord-tangent reduction: repeatedly replace two support slots of equal
    sign by their group sum, recording chord/vertical factors, until the
    divisor is exhausted.  The function is determined up to a nonzero
    constant; the seed only permutes the reduction order.  With check=True
    the formal divisor of the result is re-expanded and compared against D
    (the invariant suite and the tests run with it on).
    """
    if not D.is_principal():
        raise NotPrincipal(f"divisor has degree {D.degree} and sum "
                           f"{D.sum_point()!r}")
    curve = D.curve
    work = {P: m for P, m in D.items() if not P.is_infinity}
    o_mult = D.multiplicity(INFINITY)
    steps = []
    counter = 0
    while work:
        pos = sorted((P for P, m in work.items() if m > 0),
                     key=CurvePoint.key)
        neg = sorted((P for P, m in work.items() if m < 0),
                     key=CurvePoint.key)
        if sum(work[P] for P in pos) >= 2:
            side, sign = pos, 1
        elif sum(-work[P] for P in neg) >= 2:
            side, sign = neg, -1
        else:
            raise AssertionError("unreachable: residual divisor of a "
                                 "principal divisor cannot be reduced")
        P, Q = _pick_pair(side, work, seed, counter)
        counter += 1
        if P == curve.neg(Q):
            steps.append(Step("vert", P, exp=sign))
            o_mult += 2 * sign
        else:
            R, lam = curve._add_with_slope(P, Q)
            steps.append(Step("chord", P, Q=Q, lam=lam,
                              third=curve.neg(R), exp=sign))
            steps.append(Step("vert", R, exp=-sign))
            work[R] = work.get(R, 0) + sign
            if work[R] == 0:
                del work[R]
            o_mult += sign
        if P == Q:
            work[P] -= 2 * sign
        else:
            work[P] -= sign
            work[Q] -= sign
        for T in (P, Q):
            if T in work and work[T] == 0:
                del work[T]
    if o_mult != 0:
        raise AssertionError("O-multiplicity did not balance")
    prog = LineProgram(curve, steps, D)
    if check and prog.divisor() != D:
        raise AssertionError("program divisor does not match target")
    return prog


@dataclass(frozen=True)
class EvalPair:
    """The gluing pair (q, -q); order of q must exceed 2."""

    plus: CurvePoint
    minus: CurvePoint

    @classmethod
    def of(cls, curve: CurveSpec, q: CurvePoint) -> EvalPair:
        if q.is_infinity or q.y.is_zero():
            raise ValueError("gluing point must have order > 2")
        return cls(q, curve.neg(q))


def _translate(D: Divisor, T: CurvePoint) -> Divisor:
    curve = D.curve
    return Divisor(curve, [(curve._add(P, T), m) for P, m in D.items()])


def eval_function_on_divisor(U: Divisor, D: Divisor,
                             retries: int = RETRY_BUDGET):
    """f(D) for any f with div(f) = U; exact, and scale-free since deg D = 0.

    First tries direct evaluation under permuted reduction orders.  When
    the support of U and the points of D sit inside one small subgroup,
    every reduction order produces a line through the evaluation points,
    so direct retries cannot succeed; then the divisor D is translated by
    an auxiliary point T and the result corrected through Weil
    reciprocity:

        f(D) = f(D_T) * h(U),   div(h) = D - D_T,

    which is an exact identity (D - D_T is principal because deg D = 0).
    """
    if not U.is_principal():
        raise NotPrincipal("the function divisor must be principal")
    if D.degree != 0:
        raise ValueError("evaluation divisor must have degree zero")
    if not U.supports_disjoint(D):
        raise SupportsNotDisjoint("evaluation divisor meets div(f)")
    last = None
    progs = []

    def prog_at(seed):
        while len(progs) <= seed:
            progs.append(function_with_divisor(U, seed=len(progs)))
        return progs[seed]

    for seed in range(2):
        try:
            return prog_at(seed).eval_divisor(D)
        except SupportCollision as exc:
            last = exc
    curve = U.curve
    table = curve.points()
    n_aff = len(table) - 1
    blocked = set(P.key() for P in U.support()) | \
        set(P.key() for P in D.support())
    attempts = 0
    for aux in range(n_aff):
        T = table[1 + (5 * aux + 3) % n_aff]
        shifted = [curve._add(P, T) for P in D.support()]
        if any(S.is_infinity or S.key() in blocked for S in shifted):
            continue
        DT = _translate(D, T)
        corr = D - DT
        attempts += 1
        f_val = h_val = None
        for seed in range(4):
            if f_val is None:
                try:
                    f_val = prog_at(seed).eval_divisor(DT)
                except SupportCollision as exc:
                    last = exc
            if h_val is None:
                try:
                    h_val = function_with_divisor(
                        corr, seed=seed).eval_divisor(U)
                except SupportCollision as exc:
                    last = exc
            if f_val is not None and h_val is not None:
                return f_val * h_val
        if attempts >= retries:
            break
    raise SupportCollision(
        f"no collision-free evaluation found in {retries} translated "
        "attempts") from last


def eval_ratio(D: Divisor, pair: EvalPair,
               retries: int = RETRY_BUDGET):
    """f(plus)/f(minus) for any f with div(f) = D.

    Independent of the scalar ambiguity and of the reduction order;
    collisions fall back to the translated evaluation of
    eval_function_on_divisor.
    """
    if D.multiplicity(pair.plus) or D.multiplicity(pair.minus):
        raise SupportsNotDisjoint("divisor touches the evaluation pair")
    E = Divisor(D.curve, [(pair.plus, 1), (pair.minus, -1)])
    return eval_function_on_divisor(D, E, retries=retries)


def norm_along(cm: CMStructure, a: Endo, f: LineProgram, P: CurvePoint):
    """(Norm_a f)(P) = product of f over the fiber of a above P."""
    pre = cm.preimages(a, P)
    if len(pre) != a.degree():
        from .errors import PreimageNotRational
        raise PreimageNotRational(
            f"{P} has {len(pre)} rational preimages under {a}")
    acc = cm.curve.field.one
    for T in pre:
        acc = acc * f.eval(T)
    return acc


def weil_reciprocity_check(f: LineProgram, g: LineProgram) -> bool:
    """Whether f(div g) = g(div f); supports must be disjoint."""
    if not f.target.supports_disjoint(g.target):
        raise SupportsNotDisjoint("divisors of f and g share support")
    return f.eval_divisor(g.target) == g.eval_divisor(f.target)


def weil_pairing(curve: CurveSpec, n: int, P: CurvePoint, Q: CurvePoint,
                 aux_start: int = 0):
    """The order-n Weil pairing e_n(P, Q) = f(D_Q)/g(D_P).

    D_P = (P+R) - (R) and D_Q = (Q+S) - (S) with auxiliary points R, S
    scanned deterministically from the point table until the supports are
    disjoint and no line collision occurs; div f = n*D_P, div g = n*D_Q.
    The value is an n-th root of unity independent of all choices;
    aux_start only shifts the auxiliary scan (useful for cross-checks).
    """
    field = curve.field
    if math.gcd(n, field.p) != 1:
        raise CharacteristicDividesN(f"p = {field.p} divides n = {n}")
    curve.require_on_curve(P, Q)
    if not curve._scalar(n, P).is_infinity:
        raise NotTorsion(f"{P} is not {n}-torsion")
    if not curve._scalar(n, Q).is_infinity:
        raise NotTorsion(f"{Q} is not {n}-torsion")
    if P.is_infinity or Q.is_infinity:
        return field.one
    table = curve.points()
    n_aff = len(table) - 1
    for aux in range(aux_start, aux_start + 64):
        R = table[1 + (3 * aux + 1) % n_aff]
        S = table[1 + (5 * aux + 2) % n_aff]
        PR = curve._add(P, R)
        QS = curve._add(Q, S)
        if PR.is_infinity or QS.is_infinity:
            continue
        if {PR.key(), R.key()} & {QS.key(), S.key()}:
            continue
        DP = Divisor(curve, [(PR, 1), (R, -1)])
        DQ = Divisor(curve, [(QS, 1), (S, -1)])
        for seed in range(4):
            try:
                f = function_with_divisor(n * DP, seed=seed)
                g = function_with_divisor(n * DQ, seed=seed)
                val = (f.eval(QS) / f.eval(S)) / (g.eval(PR) / g.eval(R))
            except SupportCollision:
                continue
            if val ** n != field.one:
                raise PathDisagreement("pairing value is not in mu_n")
            return val
    raise SupportCollision("no valid auxiliary points found for the pairing")
