"""Formal divisors on an elliptic curve.

A divisor is a finite Z-linear combination of points, stored sparsely
with the canonical point ordering so that iteration (and hence anything
derived from it, like reduction order in function construction) is
reproducible without a seed.
"""

from __future__ import annotations

from .elliptic_curve import INFINITY, CurvePoint, CurveSpec
from .errors import CurveMismatch


class Divisor:
    """Immutable sparse divisor: map CurvePoint -> nonzero multiplicity."""

    __slots__ = ("curve", "_mults")

    def __init__(self, curve: CurveSpec, mults=None):
        self.curve = curve
        clean = {}
        if mults:
            for P, m in (mults.items() if isinstance(mults, dict) else mults):
                m = int(m)
                if m:
                    clean[P] = clean.get(P, 0) + m
                    if clean[P] == 0:
                        del clean[P]
        self._mults = clean

    @classmethod
    def of_point(cls, curve: CurveSpec, P: CurvePoint, mult: int = 1):
        return cls(curve, {P: mult})

    def items(self):
        """(point, multiplicity) pairs in canonical order."""
        return sorted(self._mults.items(), key=lambda kv: kv[0].key())

    def multiplicity(self, P: CurvePoint) -> int:
        return self._mults.get(P, 0)

    def support(self):
        return [P for P, _ in self.items()]

    @property
    def degree(self) -> int:
        return sum(self._mults.values())

    def sum_point(self) -> CurvePoint:
        """Group sum of mult*P over the support."""
        acc = INFINITY
        for P, m in self.items():
            acc = self.curve._add(acc, self.curve._scalar(m, P))
        return acc

    def is_principal(self) -> bool:
        """Degree zero and group-sum O (the genus-1 Abel criterion)."""
        return self.degree == 0 and self.sum_point().is_infinity

    def is_zero(self) -> bool:
        return not self._mults

    def _require_same_curve(self, other: Divisor):
        if other.curve != self.curve:
            raise CurveMismatch("divisors live on different curves")

    def __add__(self, other: Divisor) -> Divisor:
        self._require_same_curve(other)
        out = dict(self._mults)
        for P, m in other._mults.items():
            out[P] = out.get(P, 0) + m
        return Divisor(self.curve, out)

    def __sub__(self, other: Divisor) -> Divisor:
        return self + (-other)

    def __neg__(self) -> Divisor:
        return Divisor(self.curve, {P: -m for P, m in self._mults.items()})

    def __rmul__(self, c: int) -> Divisor:
        return Divisor(self.curve, {P: c * m for P, m in self._mults.items()})

    __mul__ = __rmul__

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self.curve == other.curve and self._mults == other._mults

    def __hash__(self):
        return hash(tuple((P.key(), m) for P, m in self.items()))

    def supports_disjoint(self, other: Divisor) -> bool:
        self._require_same_curve(other)
        small, big = self._mults, other._mults
        if len(big) < len(small):
            small, big = big, small
        return not any(P in big for P in small)

    def __repr__(self):
        if not self._mults:
            return "0"
        terms = []
        for P, m in self.items():
            pt = "(O)" if P.is_infinity else f"({P.x!r},{P.y!r})"
            terms.append(f"{m}*{pt}")
        return " + ".join(terms)


def div_combine(c1: int, d1: Divisor, c2: int, d2: Divisor) -> Divisor:
    """c1*d1 + c2*d2 with zero entries pruned."""
    return c1 * d1 + c2 * d2
