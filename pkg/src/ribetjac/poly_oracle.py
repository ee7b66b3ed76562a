"""Closed-form polynomial cross-check for line-program evaluation.

Multiplies the actual line polynomials symbolically in
F[x, y] / (y^2 - x^3 - a4*x - a6) and evaluates the resulting fraction.
Degrees grow with the program, so this stays a desk-scale oracle (used up
to n = 7 in the test suite); the line-program path is the production
evaluator.
"""

from __future__ import annotations

from .elliptic_curve import CurvePoint, CurveSpec
from .function_eval import LineProgram


def _trim(c):
    while c and c[-1].is_zero():
        c.pop()
    return c

def _padd(a, b, field):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else field.zero
        y = b[i] if i < len(b) else field.zero
        out.append(x + y)
    return _trim(out)

def _pmul(a, b, field):
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai.is_zero():
            continue
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return _trim(out)

def _peval(a, x, field):
    acc = field.zero
    for c in reversed(a):
        acc = acc * x + c
    return acc


class CurvePoly:
    """u(x) + v(x)*y reduced modulo the curve equation."""

    def __init__(self, curve: CurveSpec, u=None, v=None):
        self.curve = curve
        self.u = _trim(list(u or []))
        self.v = _trim(list(v or []))

    @classmethod
    def const(cls, curve, value):
        return cls(curve, [curve.field(value)], [])

    def _cubic(self):
        f = self.curve.field
        return [self.curve.a6, self.curve.a4, f.zero, f.one]

    def __mul__(self, other: CurvePoly) -> CurvePoly:
        f = self.curve.field
        uu = _pmul(self.u, other.u, f)
        vv = _pmul(self.v, other.v, f)
        uv = _padd(_pmul(self.u, other.v, f), _pmul(self.v, other.u, f), f)
        # y^2 -> x^3 + a4*x + a6
        u = _padd(uu, _pmul(vv, self._cubic(), f), f)
        return CurvePoly(self.curve, u, uv)

    def evaluate(self, P: CurvePoint):
        f = self.curve.field
        val = _peval(self.u, P.x, f)
        if self.v:
            val = val + _peval(self.v, P.x, f) * P.y
        return val

    def is_zero(self):
        return not self.u and not self.v


def program_as_fraction(prog: LineProgram):
    """Expand a line program into a (numerator, denominator) pair."""
    curve = prog.curve
    f = curve.field
    num = CurvePoly.const(curve, 1)
    den = CurvePoly.const(curve, 1)
    for s in prog.steps:
        if s.kind == "vert":
            line = CurvePoly(curve, [-s.P.x, f.one], [])
        else:
            line = CurvePoly(curve, [s.lam * s.P.x - s.P.y, -s.lam], [f.one])
        for _ in range(abs(s.exp)):
            if s.exp > 0:
                num = num * line
            else:
                den = den * line
    return num, den


def oracle_eval(prog: LineProgram, P: CurvePoint):
    """Evaluate a program through its explicit polynomial expansion."""
    num, den = program_as_fraction(prog)
    dv = den.evaluate(P)
    if dv.is_zero():
        raise ZeroDivisionError("oracle denominator vanishes at the point")
    return num.evaluate(P) / dv


def oracle_ratio(prog: LineProgram, plus: CurvePoint, minus: CurvePoint):
    """f(plus)/f(minus) computed entirely with polynomial arithmetic."""
    return oracle_eval(prog, plus) / oracle_eval(prog, minus)
