"""Short Weierstrass curves over desk-scale finite fields.

Affine chord-tangent group law, full point enumeration (vectorized with
numpy so that fields near the 2**21 bound stay fast), exact point orders,
and exhaustive torsion-point search.  The dual curve is never
materialized: the standard principal polarization identifies it with the
curve itself, so a single CurveSpec plays both roles throughout the
package.

Torsion search strategy.  For small groups (<= _FULL_SCAN points) we scan
the table directly.  Above that the curves of interest here have CM by
Z[i] or Z[zeta_3] with the curve coefficients in the prime field; then
E(F_{p^m}) is a cyclic module over the CM order and its abelian-group
shape (d1, d2) follows from the base-field Frobenius, which we pin down
by counting E(F_p) and cross-check against the enumerated group order.
Subgroup generators are then located by deterministic probing, with
independence certified through the Weil pairing.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import (
    CharacteristicDividesN,
    CurveMismatch,
    FieldTooLarge,
    FullTorsionNotRational,
    PointNotOnCurve,
)
from .finite_field import DESK_SCALE_BOUND, FieldElement, FieldSpec, factorize

_FULL_SCAN = 65536


class CurvePoint:
    """Affine point (x, y) or the point at infinity."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x = x
        self.y = y

    @property
    def is_infinity(self):
        return self.x is None

    def key(self):
        """Canonical sort key: infinity first, then (x, y) encodings."""
        if self.x is None:
            return (0, 0, 0)
        return (1, self.x.index(), self.y.index())

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.x is None or other.x is None:
            return self.x is None and other.x is None
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        if self.x is None:
            return hash(("inf",))
        return hash((self.x.coeffs, self.y.coeffs))

    def __repr__(self):
        if self.x is None:
            return "O"
        return f"({self.x!r},{self.y!r})"

    def __reduce__(self):
        if self.x is None:
            return (_infinity_instance, ())
        return (CurvePoint, (self.x, self.y))


INFINITY = CurvePoint(None, None)


def _infinity_instance():
    return INFINITY


class PointTable:
    """Lazy, immutable view of all rational points; index 0 is O."""

    def __init__(self, curve, x_idx, y_idx):
        self._curve = curve
        self._x = x_idx
        self._y = y_idx

    def __len__(self):
        return len(self._x) + 1

    def __getitem__(self, i):
        if i < 0:
            i += len(self)
        if i == 0:
            return INFINITY
        sp = self._curve.field
        return CurvePoint(sp.from_index(int(self._x[i - 1])),
                          sp.from_index(int(self._y[i - 1])))

    def __iter__(self):
        yield INFINITY
        sp = self._curve.field
        for xi, yi in zip(self._x, self._y):
            yield CurvePoint(sp.from_index(int(xi)), sp.from_index(int(yi)))


# ---------------------------------------------------------------------------
# vectorized field helpers (int64 coefficient matrices, one row per element)

def _decode_all(q, p, m):
    C = np.empty((q, m), dtype=np.int64)
    t = np.arange(q, dtype=np.int64)
    for j in range(m):
        C[:, j] = t % p
        t //= p
    return C

def _vec_mul(A, B, p, red):
    m = A.shape[1]
    if m == 1:
        if B.ndim == 1:
            return (A * B[0]) % p
        return (A * B) % p
    acc = np.zeros((A.shape[0], 2 * m - 1), dtype=np.int64)
    for i in range(m):
        col = A[:, i]
        for j in range(m):
            b = B[j] if B.ndim == 1 else B[:, j]
            if B.ndim == 1 and not b:
                continue
            acc[:, i + j] += col * b
    out = acc[:, :m]
    for k in range(m - 1):
        c = acc[:, m + k]
        row = red[k]
        for j in range(m):
            if row[j]:
                out[:, j] += c * row[j]
    return out % p


def _enumerate_table(spec: FieldSpec, a4: FieldElement, a6: FieldElement):
    q, p, m = spec.size, spec.p, spec.m
    red = spec._red
    C = _decode_all(q, p, m)
    powers = p ** np.arange(m, dtype=np.int64)
    sq = _vec_mul(C, C, p, red)                      # z^2 for every z
    cube = _vec_mul(sq, C, p, red)
    rhs = (cube + _vec_mul(C, np.array(a4.coeffs, dtype=np.int64), p, red)
           + np.array(a6.coeffs, dtype=np.int64)) % p
    sq_idx = sq @ powers
    rhs_idx = rhs @ powers
    sqrt_of = np.full(q, -1, dtype=np.int64)
    sqrt_of[sq_idx] = np.arange(q, dtype=np.int64)
    neg_idx = ((p - C) % p) @ powers
    y0 = sqrt_of[rhs_idx]
    xs = np.nonzero(y0 >= 0)[0]
    ys = y0[xs]
    yneg = neg_idx[ys]
    two = ys != yneg
    X = np.concatenate([xs, xs[two]])
    Y = np.concatenate([ys, yneg[two]])
    order = np.lexsort((Y, X))
    return X[order], Y[order]


# ---------------------------------------------------------------------------
# CM order bookkeeping for the structure computation.  Pairs (u, v) denote
# u + v*i (gaussian) or u + v*zeta (eisenstein); only integer arithmetic.

def _cm_mul(kind, a, b):
    u1, v1 = a
    u2, v2 = b
    if kind == "gaussian":
        return (u1 * u2 - v1 * v2, u1 * v2 + u2 * v1)
    return (u1 * u2 - v1 * v2, u1 * v2 + u2 * v1 - v1 * v2)

def _cm_norm(kind, a):
    u, v = a
    if kind == "gaussian":
        return u * u + v * v
    return u * u - u * v + v * v

def _cm_associates(kind, a):
    """All unit multiples of a and of its conjugate."""
    u, v = a
    conj = (u - v, -v) if kind == "eisenstein" else (u, -v)
    units = ([(1, 0), (-1, 0), (0, 1), (0, -1)] if kind == "gaussian" else
             [(1, 0), (-1, 0), (0, 1), (0, -1), (-1, 1), (1, -1)])
    seen = []
    for base in (a, conj):
        for w in units:
            c = _cm_mul(kind, base, w)
            if c not in seen:
                seen.append(c)
    return seen

def _frobenius_candidates(kind, p):
    """Elements of norm p in the CM order, up to nothing (all associates)."""
    out = []
    bound = int(math.isqrt(4 * p)) + 2
    for u in range(-bound, bound + 1):
        for v in range(-bound, bound + 1):
            if _cm_norm(kind, (u, v)) == p:
                out.append((u, v))
    return out


class CurveStructure:
    """Group-theoretic data for one curve: order, (d1, d2), Sylow bases."""

    def __init__(self, order, factors, d1, d2, cm_kind, frobenius):
        self.order = order
        self.factors = factors
        self.d1 = d1
        self.d2 = d2
        self.cm_kind = cm_kind
        self.frobenius = frobenius


class CurveSpec:
    """Curve y^2 = x^3 + a4*x + a6 over a FieldSpec.

    The point table and all derived caches are built lazily and never
    mutated afterwards, so a CurveSpec is safe to share across parallel
    fiber computations.
    """

    def __init__(self, field: FieldSpec, a4, a6, max_size: int = DESK_SCALE_BOUND):
        if field.p in (2, 3):
            raise ValueError("characteristic 2 and 3 are not supported")
        self.field = field
        self.a4 = field(a4)
        self.a6 = field(a6)
        disc = field(4) * self.a4 ** 3 + field(27) * self.a6 ** 2
        if disc.is_zero():
            raise ValueError("singular curve: 4*a4^3 + 27*a6^2 = 0")
        self.max_size = max_size
        self._table = None
        self._structure = None
        self._sylow_cache = {}
        self._preimage_maps = {}

    # -- basic point operations ------------------------------------------

    def is_on_curve(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        if P.x.spec != self.field:
            return False
        return P.y * P.y == P.x ** 3 + self.a4 * P.x + self.a6

    def point(self, x, y) -> CurvePoint:
        P = CurvePoint(self.field(x), self.field(y))
        if not self.is_on_curve(P):
            raise PointNotOnCurve(f"({x}, {y}) not on {self}")
        return P

    def require_on_curve(self, *points):
        for P in points:
            if not self.is_on_curve(P):
                raise PointNotOnCurve(f"{P} not on {self}")

    def neg(self, P: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return P
        return CurvePoint(P.x, -P.y)

    def _add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        if P.x == Q.x:
            if P.y == -Q.y:
                return INFINITY
            lam = (self.field(3) * P.x * P.x + self.a4) / (self.field(2) * P.y)
        else:
            lam = (Q.y - P.y) / (Q.x - P.x)
        x3 = lam * lam - P.x - Q.x
        y3 = lam * (P.x - x3) - P.y
        return CurvePoint(x3, y3)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        self.require_on_curve(P, Q)
        return self._add(P, Q)

    def sub(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        return self._add(P, self.neg(Q))

    def _scalar(self, k: int, P: CurvePoint) -> CurvePoint:
        if k < 0:
            return self._scalar(-k, self.neg(P))
        R = INFINITY
        Q = P
        while k:
            if k & 1:
                R = self._add(R, Q)
            k >>= 1
            if k:
                Q = self._add(Q, Q)
        return R

    def scalar_mul(self, k: int, P: CurvePoint) -> CurvePoint:
        self.require_on_curve(P)
        return self._scalar(k, P)

    def chord_slope(self, P: CurvePoint, Q: CurvePoint) -> FieldElement:
        """Slope of the line through P and Q (tangent when P == Q)."""
        if P == Q:
            return (self.field(3) * P.x * P.x + self.a4) / (self.field(2) * P.y)
        return (Q.y - P.y) / (Q.x - P.x)

    def _add_with_slope(self, P: CurvePoint, Q: CurvePoint):
        """(P + Q, slope) for affine P, Q with P + Q != O; one inversion."""
        lam = self.chord_slope(P, Q)
        x3 = lam * lam - P.x - Q.x
        y3 = lam * (P.x - x3) - P.y
        return CurvePoint(x3, y3), lam

    # -- enumeration and orders ------------------------------------------

    def points(self) -> PointTable:
        """All rational points including O, in a canonical order; cached."""
        if self._table is None:
            if self.field.size > self.max_size:
                raise FieldTooLarge(
                    f"enumeration needs {self.field.size} <= {self.max_size}")
            X, Y = _enumerate_table(self.field, self.a4, self.a6)
            self._table = PointTable(self, X, Y)
        return self._table

    def group_order(self) -> int:
        return len(self.points())

    def order_factors(self):
        return factorize(self.group_order())

    def point_order(self, P: CurvePoint) -> int:
        self.require_on_curve(P)
        if P.is_infinity:
            return 1
        d = self.group_order()
        for ell, _ in self.order_factors():
            while d % ell == 0 and self._scalar(d // ell, P).is_infinity:
                d //= ell
        return d

    # -- group structure ---------------------------------------------------

    def structure(self) -> CurveStructure:
        """Abelian group shape Z/d1 x Z/d2 (d1 | d2), when determinable."""
        if self._structure is not None:
            return self._structure
        n = self.group_order()
        factors = factorize(n)
        cm_kind = self._cm_shape()
        d1 = d2 = None
        frob = None
        if cm_kind is not None:
            frob = self._frobenius(cm_kind)
            if frob is not None:
                power = frob
                for _ in range(self.field.m - 1):
                    power = _cm_mul(cm_kind, power, frob)
                u, v = power[0] - 1, power[1]
                if _cm_norm(cm_kind, (u, v)) == n:
                    d1 = math.gcd(abs(u), abs(v))
                    d2 = n // d1
                    assert (self.field.size - 1) % d1 == 0
                else:
                    frob = None
        self._structure = CurveStructure(n, factors, d1, d2, cm_kind, frob)
        return self._structure

    def _cm_shape(self):
        if self.field.m > 1:
            if any(c != 0 for c in self.a4.coeffs[1:]):
                return None
            if any(c != 0 for c in self.a6.coeffs[1:]):
                return None
        p = self.field.p
        if self.a6.is_zero() and p % 4 == 1:
            return "gaussian"
        if self.a4.is_zero() and p % 3 == 1:
            return "eisenstein"
        return None

    def _frobenius(self, kind):
        """Base-field Frobenius as a CM-order element, fixed by counting."""
        p = self.field.p
        if p > 100000:
            return None
        base_field = FieldSpec(p, 1, max_size=max(self.max_size, p))
        base = CurveSpec(base_field, self.a4.coeffs[0], self.a6.coeffs[0],
                         max_size=max(self.max_size, p))
        np_count = base.group_order()
        for cand in sorted(set(
                c for pi in _frobenius_candidates(kind, p)
                for c in _cm_associates(kind, pi))):
            u, v = cand[0] - 1, cand[1]
            if _cm_norm(kind, (u, v)) == np_count:
                return cand
        return None

    # -- torsion machinery -------------------------------------------------

    def _sample_points(self):
        """Deterministic spread over the affine table, then a linear pass."""
        table = self.points()
        n_aff = len(table) - 1
        step = max(1, n_aff // 257)
        seen = set()
        for start in range(step):
            for i in range(1 + start, n_aff + 1, step):
                if i not in seen:
                    seen.add(i)
                    yield table[i]

    def _sylow_data(self, ell):
        """(a, b, G1, G2) for the ell-Sylow subgroup, pairing-certified."""
        if ell in self._sylow_cache:
            return self._sylow_cache[ell]
        st = self.structure()
        if st.d1 is None:
            raise FieldTooLarge(
                "group structure unavailable: curve is too large and not "
                "CM-shaped with prime-field coefficients")
        v = 0
        n = st.order
        while n % ell == 0:
            n //= ell
            v += 1
        a = 0
        d1 = st.d1
        while d1 % ell == 0:
            d1 //= ell
            a += 1
        b = v - a
        cof = st.order // ell**v
        G2 = None
        tries = 0
        for P in self._sample_points():
            tries += 1
            Q = self._scalar(cof, P)
            if self._point_ell_order(Q, ell, v) == b:
                G2 = Q
                break
            if tries > 8192:
                raise RuntimeError(f"no point of maximal {ell}-order found")
        G1 = None
        if a > 0:
            from .function_eval import weil_pairing
            from .finite_field import mult_order
            shifted = self._scalar(ell ** (b - a), G2)
            tries = 0
            for P in self._sample_points():
                tries += 1
                Q = self._scalar(cof, P)
                t = self._point_ell_order(Q, ell, v)
                if t < a:
                    continue
                C = self._scalar(ell ** (t - a), Q)
                w = weil_pairing(self, ell**a, C, shifted)
                if not w.is_zero() and mult_order(w) == ell**a:
                    G1 = C
                    break
                if tries > 8192:
                    raise RuntimeError(f"no independent {ell}-torsion found")
        self._sylow_cache[ell] = (a, b, G1, G2)
        return self._sylow_cache[ell]

    def _point_ell_order(self, P, ell, vmax):
        for k in range(vmax + 1):
            if P.is_infinity:
                return k
            P = self._scalar(ell, P)
        raise AssertionError("point order exceeds the Sylow exponent")

    def _kernel_of_prime_power(self, ell, e):
        """All points killed by ell^e, as a sorted list."""
        st = self.structure()
        v = sum(exp for q, exp in st.factors if q == ell)
        if v == 0:
            return [INFINITY]
        a, b, G1, G2 = self._sylow_data(ell)
        e1, e2 = min(a, e), min(b, e)
        B2 = self._scalar(ell ** (b - e2), G2)
        gens = [(B2, ell**e2)]
        if e1 > 0:
            B1 = self._scalar(ell ** (a - e1), G1)
            gens.append((B1, ell**e1))
        pts = [INFINITY]
        for g, order in gens:
            acc = INFINITY
            layer = []
            for _ in range(order - 1):
                acc = self._add(acc, g)
                layer.append(acc)
            pts = pts + [self._add(P, L) for P in pts for L in layer]
        expect = ell ** (e1 + e2)
        assert len(pts) == expect, "Sylow kernel size mismatch"
        return pts

    def torsion_subgroup(self, n: int) -> list[CurvePoint]:
        """All points P with n*P = O (the full n-torsion kernel)."""
        if n < 1:
            raise ValueError("n must be positive")
        if n == 1:
            return [INFINITY]
        if self.group_order() <= _FULL_SCAN and self.structure().d1 is None:
            pts = [P for P in self.points() if self._scalar(n, P).is_infinity]
            pts.sort(key=CurvePoint.key)
            return pts
        pts = [INFINITY]
        for ell, e in factorize(n):
            layer = self._kernel_of_prime_power(ell, e)
            pts = [self._add(P, L) for P in pts for L in layer]
        pts.sort(key=CurvePoint.key)
        return pts

    def find_points_of_order(self, n: int) -> list[CurvePoint]:
        """All points of exact order n, sorted lexicographically."""
        if n == 1:
            return [INFINITY]
        prime_divs = [ell for ell, _ in factorize(n)]
        out = []
        for P in self.torsion_subgroup(n):
            if P.is_infinity:
                continue
            if all(not self._scalar(n // ell, P).is_infinity
                   for ell in prime_divs):
                out.append(P)
        return out

    def count_torsion(self, n: int) -> int:
        return len(self.torsion_subgroup(n))

    def torsion_basis(self, n: int):
        """A pair (P1, P2) with e_n(P1, P2) of multiplicative order n."""
        if n == 1:
            return (INFINITY, INFINITY)
        if math.gcd(n, self.field.p) != 1:
            raise CharacteristicDividesN(f"p = {self.field.p} divides {n}")
        if self.count_torsion(n) != n * n:
            raise FullTorsionNotRational(
                f"E[{n}] is not rational over {self.field}")
        from .function_eval import weil_pairing
        from .finite_field import mult_order
        pts = self.find_points_of_order(n)
        P1 = pts[0]
        for P2 in pts[1:]:
            w = weil_pairing(self, n, P1, P2)
            if mult_order(w) == n:
                return (P1, P2)
        raise FullTorsionNotRational(f"no nondegenerate pair for n = {n}")

    # -- misc ---------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, CurveSpec) and self.field == other.field
                and self.a4 == other.a4 and self.a6 == other.a6)

    def __hash__(self):
        return hash((self.field, self.a4, self.a6))

    def __repr__(self):
        return f"y^2 = x^3 + {self.a4!r}*x + {self.a6!r} over {self.field!r}"

    def literal(self) -> str:
        return f"{self.a4.coeffs[0]},{self.a6.coeffs[0]}"


def parse_curve(literal: str, field: FieldSpec,
                max_size: int = DESK_SCALE_BOUND) -> CurveSpec:
    """Parse an 'a4,a6' curve literal over the given field."""
    parts = literal.split(",")
    if len(parts) != 2:
        raise ValueError(f"bad curve literal {literal!r}; expected 'a4,a6'")
    return CurveSpec(field, int(parts[0]), int(parts[1]), max_size=max_size)
