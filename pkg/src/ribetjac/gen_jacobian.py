"""Degree-zero divisor classes on the one-node curve glued from (q, -q).

The singular curve itself is never materialized.  A class is a degree-zero
divisor with support away from the node preimages {q, -q}; two divisors
give the same class when their difference is div(f) for an f regular at
q and -q with f(q) = f(-q).  Projection to the smooth curve is the group
sum of the representative; a class in the kernel of that projection is a
scalar, namely f(q)/f(-q) for any f cutting out its representative.

The exact order of a class z is m*d, where m is the order of its
projection and d the multiplicative order of the kernel scalar of m*z:
any annihilator of z is a multiple of m, and (m*j)*z carries kernel
scalar lambda^j.
"""

from __future__ import annotations

from .divisor import Divisor
from .elliptic_curve import CurvePoint, CurveSpec
from .errors import NotInKernel, QInBadLocus
from .finite_field import mult_order
from .function_eval import EvalPair, eval_ratio


class NodalFiber:
    """One fiber of the family: a curve plus a gluing point of order > 2."""

    def __init__(self, curve: CurveSpec, q: CurvePoint):
        curve.require_on_curve(q)
        if q.is_infinity or q.y.is_zero():
            raise QInBadLocus("gluing point must have order at least 3")
        self.curve = curve
        self.q = q
        self.minus_q = curve.neg(q)
        self.pair = EvalPair(q, self.minus_q)

    def node_divisor(self) -> Divisor:
        return Divisor(self.curve, [(self.q, 1), (self.minus_q, 1)])

    def __eq__(self, other):
        return (isinstance(other, NodalFiber) and self.curve == other.curve
                and self.q == other.q)

    def __hash__(self):
        return hash((self.curve, self.q))

    def __repr__(self):
        return f"NodalFiber(q={self.q!r})"


class JacClass:
    """A class in the generalized Jacobian of a NodalFiber."""

    def __init__(self, fiber: NodalFiber, rep: Divisor):
        if rep.curve != fiber.curve:
            from .errors import CurveMismatch
            raise CurveMismatch("representative lives on the wrong curve")
        if rep.degree != 0:
            raise ValueError("representative must have degree zero")
        if rep.multiplicity(fiber.q) or rep.multiplicity(fiber.minus_q):
            raise QInBadLocus(
                "representative support meets the node {q, -q}")
        self.fiber = fiber
        self.rep = rep

    def project(self) -> CurvePoint:
        """Image on the smooth curve under (P) - (O) |-> P."""
        return self.rep.sum_point()

    def kernel_value(self):
        """Coordinate in the multiplicative kernel; needs projection O."""
        if not self.project().is_infinity:
            raise NotInKernel("class does not project to the identity")
        if self.rep.is_zero():
            return self.fiber.curve.field.one
        return eval_ratio(self.rep, self.fiber.pair)

    def order(self) -> int:
        """Exact order: ord(projection) times ord of the kernel scalar."""
        m = self.fiber.curve.point_order(self.project())
        lam = (m * self).kernel_value()
        return m * mult_order(lam)

    def __add__(self, other: JacClass) -> JacClass:
        if other.fiber != self.fiber:
            raise ValueError("classes belong to different fibers")
        return JacClass(self.fiber, self.rep + other.rep)

    def __rmul__(self, k: int) -> JacClass:
        return JacClass(self.fiber, k * self.rep)

    __mul__ = __rmul__

    def __neg__(self) -> JacClass:
        return JacClass(self.fiber, -self.rep)

    def is_zero(self) -> bool:
        if not self.project().is_infinity:
            return False
        return self.kernel_value() == self.fiber.curve.field.one

    def same_class(self, other: JacClass) -> bool:
        """Whether the two representatives differ by div(f), f(q) = f(-q)."""
        return (self + (-other)).is_zero()

    def serialize(self):
        return {
            "q": [list(self.fiber.q.x.coeffs), list(self.fiber.q.y.coeffs)],
            "rep": repr(self.rep),
        }

    def __repr__(self):
        return f"JacClass({self.rep!r} on {self.fiber!r})"
