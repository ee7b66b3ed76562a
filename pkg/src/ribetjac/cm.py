"""Complex multiplication by Z[i] or Z[zeta_3] and its divisor calculus.

An endomorphism u = m + n*iota acts on points as m*P + n*iota(P), where
iota is the explicit extra automorphism of the curve: (x, y) -> (-x, i*y)
on y^2 = x^3 + a4*x with i^2 = -1, and (x, y) -> (zeta*x, y) on
y^2 = x^3 + a6 with zeta a primitive cube root of unity.  The Rosati dual
is the ring conjugate; it satisfies u*dual(u) = deg(u) and
u + dual(u) = trace(u) as integers, which is what the tests pin down.

Pullbacks take all rational preimages of each support point; a preimage
in a proper field extension is an error, never a silent extension.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import islice

import numpy as np

from .divisor import Divisor
from .elliptic_curve import (
    INFINITY,
    CurvePoint,
    CurveSpec,
    _decode_all,
    _vec_mul,
)
from .errors import (
    FieldTooLarge,
    PointNotOnCurve,
    PreimageNotRational,
    ZeroEndomorphism,
)

_SCAN_BOUND = 65536

GAUSSIAN = "gaussian"
EISENSTEIN = "eisenstein"


@dataclass(frozen=True)
class Endo:
    """u = m + n*iota in the CM order of the given kind."""

    m: int
    n: int
    kind: str

    def _like(self, other) -> Endo:
        if isinstance(other, int):
            return Endo(other, 0, self.kind)
        if other.kind != self.kind:
            raise ValueError("endomorphisms from different CM orders")
        return other

    def degree(self) -> int:
        if self.kind == GAUSSIAN:
            return self.m * self.m + self.n * self.n
        return self.m * self.m - self.m * self.n + self.n * self.n

    def dual(self) -> Endo:
        """Rosati dual = ring conjugate."""
        if self.kind == GAUSSIAN:
            return Endo(self.m, -self.n, self.kind)
        return Endo(self.m - self.n, -self.n, self.kind)

    def trace(self) -> int:
        if self.kind == GAUSSIAN:
            return 2 * self.m
        return 2 * self.m - self.n

    def is_zero(self) -> bool:
        return self.m == 0 and self.n == 0

    def is_integer(self) -> bool:
        return self.n == 0

    def __add__(self, other):
        other = self._like(other)
        return Endo(self.m + other.m, self.n + other.n, self.kind)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._like(other)
        return Endo(self.m - other.m, self.n - other.n, self.kind)

    def __rsub__(self, other):
        return self._like(other) - self

    def __neg__(self):
        return Endo(-self.m, -self.n, self.kind)

    def __mul__(self, other):
        other = self._like(other)
        m1, n1, m2, n2 = self.m, self.n, other.m, other.n
        if self.kind == GAUSSIAN:
            return Endo(m1 * m2 - n1 * n2, m1 * n2 + m2 * n1, self.kind)
        return Endo(m1 * m2 - n1 * n2, m1 * n2 + m2 * n1 - n1 * n2, self.kind)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Endo(1, 0, self.kind)
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self):
        sym = "i" if self.kind == GAUSSIAN else "zeta"
        return f"{self.m}{self.n:+d}*{sym}"


_ENDO_RE = re.compile(
    r"^\s*(?P<m>[+-]?\d+)?\s*(?P<im>[+-]?\s*(?:\d+\s*\*)?\s*(?:i|zeta))?\s*$")


def parse_endo(literal: str, kind: str) -> Endo:
    """Parse 'm+n*i' / 'm+n*zeta' literals, also bare 'm', 'i', '-zeta'."""
    m = _ENDO_RE.match(literal.replace(" ", ""))
    if not m or (m.group("m") is None and m.group("im") is None):
        raise ValueError(f"cannot parse endomorphism literal {literal!r}")
    mm = int(m.group("m")) if m.group("m") else 0
    nn = 0
    im = m.group("im")
    if im:
        sym = "i" if kind == GAUSSIAN else "zeta"
        if not im.endswith(sym) or (sym == "i" and im.endswith("zeta")):
            raise ValueError(f"literal {literal!r} does not match kind {kind}")
        head = im[: -len(sym)].rstrip("*")
        if head in ("", "+"):
            nn = 1
        elif head == "-":
            nn = -1
        else:
            nn = int(head)
    return Endo(mm, nn, kind)


def _find_quadratic_root(field, c1: int, c0: int):
    """Smallest-index z with z^2 + c1*z + c0 = 0, or None."""
    p, m, q = field.p, field.m, field.size
    C = _decode_all(q, p, m)
    val = _vec_mul(C, C, p, field._red)
    if c1:
        val = (val + c1 * C) % p
    val[:, 0] = (val[:, 0] + c0) % p
    hits = np.nonzero(~val.any(axis=1))[0]
    if len(hits) == 0:
        return None
    return field.from_index(int(hits[0]))


class CMStructure:
    """A curve together with its explicit extra automorphism."""

    def __init__(self, curve: CurveSpec, kind: str, root=None):
        if kind not in (GAUSSIAN, EISENSTEIN):
            raise ValueError(f"unknown CM kind {kind!r}")
        if kind == GAUSSIAN and not curve.a6.is_zero():
            raise ValueError("gaussian CM needs a curve y^2 = x^3 + a4*x")
        if kind == EISENSTEIN and not curve.a4.is_zero():
            raise ValueError("eisenstein CM needs a curve y^2 = x^3 + a6")
        self.curve = curve
        self.kind = kind
        field = curve.field
        if root is None:
            root = (_find_quadratic_root(field, 0, 1) if kind == GAUSSIAN
                    else _find_quadratic_root(field, 1, 1))
            if root is None:
                raise ValueError(
                    f"{field!r} contains no root for the {kind} automorphism")
        else:
            root = field(root)
        if kind == GAUSSIAN:
            if root * root != field(-1):
                raise ValueError("root must satisfy i^2 = -1")
        else:
            if root * root + root + field.one != field.zero:
                raise ValueError("root must satisfy zeta^2 + zeta + 1 = 0")
        self.root = root
        self._preimage_maps = {}
        self._check_automorphism()

    def _check_automorphism(self, samples: int = 100):
        for P in islice(self.curve._sample_points(), samples):
            if not self.curve.is_on_curve(self.iota(P)):
                raise PointNotOnCurve(
                    "automorphism does not preserve the curve")

    def endo(self, m: int, n: int = 0) -> Endo:
        return Endo(m, n, self.kind)

    def iota(self, P: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return P
        if self.kind == GAUSSIAN:
            return CurvePoint(-P.x, self.root * P.y)
        return CurvePoint(self.root * P.x, P.y)

    def apply(self, u: Endo, P: CurvePoint) -> CurvePoint:
        """m*P + n*iota(P)."""
        self.curve.require_on_curve(P)
        return self.curve._add(self.curve._scalar(u.m, P),
                               self.curve._scalar(u.n, self.iota(P)))

    def kernel(self, u: Endo) -> list[CurvePoint]:
        """All rational points with u(P) = O, sorted."""
        if u.is_zero():
            raise ZeroEndomorphism("kernel of 0 is the whole curve")
        d = u.degree()
        out = [P for P in self.curve.torsion_subgroup(d)
               if self.apply(u, P).is_infinity]
        out.sort(key=CurvePoint.key)
        return out

    def preimages(self, u: Endo, S: CurvePoint) -> list[CurvePoint]:
        """All rational T with u(T) = S; degree-1 maps invert via the dual."""
        if u.is_zero():
            raise ZeroEndomorphism("0 has no fibers")
        if u.degree() == 1:
            return [self.apply(u.dual(), S)]
        key = (u.m, u.n)
        if key not in self._preimage_maps:
            if self.curve.group_order() > _SCAN_BOUND:
                raise FieldTooLarge(
                    "preimage scan for a degree>1 endomorphism needs a group "
                    f"of at most {_SCAN_BOUND} points")
            fibers = {}
            for P in self.curve.points():
                img = self.apply(u, P)
                fibers.setdefault(img.key(), []).append(P)
            self._preimage_maps[key] = fibers
        pre = self._preimage_maps[key].get(S.key(), [])
        return sorted(pre, key=CurvePoint.key)

    def pullback(self, u: Endo, D: Divisor) -> Divisor:
        """u^* D: each support point replaced by its full rational fiber."""
        if u.is_zero():
            raise ZeroEndomorphism("cannot pull back along 0")
        deg = u.degree()
        acc = {}
        for S, mult in D.items():
            pre = self.preimages(u, S)
            if len(pre) != deg:
                raise PreimageNotRational(
                    f"{S} has {len(pre)} rational preimages under {u}, "
                    f"expected {deg}; enlarge the field")
            for T in pre:
                acc[T] = acc.get(T, 0) + mult
        return Divisor(self.curve, acc)

    def pushforward(self, u: Endo, D: Divisor) -> Divisor:
        """u_* D: apply u to each support point, keeping multiplicities."""
        if u.is_zero():
            raise ZeroEndomorphism("cannot push forward along 0")
        acc = {}
        for S, mult in D.items():
            img = self.apply(u, S)
            acc[img] = acc.get(img, 0) + mult
        return Divisor(self.curve, acc)

    def __repr__(self):
        return f"CM({self.kind}, root={self.root!r}) on {self.curve!r}"
