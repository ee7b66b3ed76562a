"""Exact arithmetic in F_p and extension fields F_{p^m}.

Elements are stored in the polynomial basis as tuples of residues mod p
(constant term first).  All arithmetic is exact; there is no floating
point anywhere in the package.  Fields are desk-scale: by default
p^m <= 2**21 so that full point enumeration of a curve stays in memory.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import (
    DivisionByZero,
    FieldMismatch,
    FieldTooLarge,
    ZeroElement,
)

DESK_SCALE_BOUND = 2**21


def is_prime(n: int) -> bool:
    """Trial-division primality test; fine at desk scale."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Factor n by trial division, returned as ((prime, exponent), ...)."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def _poly_divmod(num: list[int], den: list[int], p: int):
    """Divide polynomials over F_p (coefficient lists, constant first)."""
    num = list(num)
    dden = len(den) - 1
    while den[dden] == 0:
        dden -= 1
    inv_lead = pow(den[dden], -1, p)
    quot = [0] * max(len(num) - dden, 1)
    for k in range(len(num) - 1 - dden, -1, -1):
        c = (num[k + dden] * inv_lead) % p
        if c:
            quot[k] = c
            for j in range(dden + 1):
                num[k + j] = (num[k + j] - c * den[j]) % p
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


def _is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    """Exhaustive irreducibility check for a monic polynomial over F_p.

    No root in F_p rules out linear factors; for degree >= 4 we must also
    exclude factors of degree 2..deg//2, so we trial-divide by every monic
    polynomial in that range.  Degrees that force the second stage only
    occur for tiny p under the desk-scale bound.
    """
    m = len(coeffs) - 1
    for x in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % p
        if acc == 0:
            return False
    for d in range(2, m // 2 + 1):
        for idx in range(p**d):
            div = []
            t = idx
            for _ in range(d):
                t, r = divmod(t, p)
                div.append(r)
            div.append(1)
            _, rem = _poly_divmod(list(coeffs), div, p)
            if rem == [0]:
                return False
    return True


def find_modulus(p: int, m: int) -> tuple[int, ...]:
    """First monic irreducible of degree m, by lexicographic coefficient order.

    Low coefficients are enumerated as base-p digits of 0, 1, 2, ... so the
    choice is reproducible without a seed.
    """
    for idx in range(p**m):
        coeffs = []
        t = idx
        for _ in range(m):
            t, r = divmod(t, p)
            coeffs.append(r)
        cand = tuple(coeffs) + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {m} over F_{p}")


class FieldSpec:
    """A finite field F_{p^m} given by p and a monic irreducible modulus.

    Immutable after construction and safely shareable between threads and
    forked workers; every arithmetic function on elements is pure.
    """

    __slots__ = (
        "p", "m", "modulus", "size", "_red", "zero", "one",
        "_order_factors",
    )

    def __init__(self, p: int, m: int = 1, modulus=None,
                 max_size: int = DESK_SCALE_BOUND):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        if p**m > max_size:
            raise FieldTooLarge(f"{p}^{m} exceeds the size bound {max_size}")
        self.p = p
        self.m = m
        if m == 1:
            self.modulus = None
        else:
            if modulus is None:
                modulus = find_modulus(p, m)
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != m + 1 or modulus[m] != 1:
                raise ValueError("modulus must be monic of degree m")
            if not _is_irreducible(modulus, p):
                raise ValueError(f"modulus {modulus} is reducible over F_{p}")
            self.modulus = modulus
        self.size = p**m
        # reduction rows: _red[k] = coefficients of x^(m+k) mod modulus
        if m > 1:
            rows = []
            prev = [(-c) % p for c in self.modulus[:m]]  # x^m
            rows.append(tuple(prev))
            for _ in range(m - 2):
                nxt = [0] + prev[: m - 1]
                carry = prev[m - 1]
                if carry:
                    top = rows[0]
                    nxt = [(nxt[j] + carry * top[j]) % p for j in range(m)]
                rows.append(tuple(nxt))
                prev = nxt
            self._red = tuple(rows)
        else:
            self._red = ()
        self.zero = FieldElement(self, (0,) * m)
        self.one = FieldElement(self, (1,) + (0,) * (m - 1))
        self._order_factors = None

    def __call__(self, value) -> FieldElement:
        """Coerce an int, an iterable of residues, or an element."""
        if isinstance(value, FieldElement):
            if value.spec is self or value.spec == self:
                return value
            raise FieldMismatch("element belongs to a different field")
        if isinstance(value, int):
            coeffs = (value % self.p,) + (0,) * (self.m - 1)
            return FieldElement(self, coeffs)
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) != self.m:
            raise ValueError(f"expected {self.m} coefficients")
        return FieldElement(self, coeffs)

    def from_index(self, idx: int) -> FieldElement:
        """Element whose base-p digit expansion (constant first) is idx."""
        coeffs = []
        for _ in range(self.m):
            idx, r = divmod(idx, self.p)
            coeffs.append(r)
        return FieldElement(self, tuple(coeffs))

    def order_factors(self):
        """Cached factorization of |F*| = p^m - 1."""
        if self._order_factors is None:
            self._order_factors = factorize(self.size - 1)
        return self._order_factors

    def elements(self):
        for idx in range(self.size):
            yield self.from_index(idx)

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.m == other.m
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        if self.m == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.m}(mod {list(self.modulus)})"

    def literal(self) -> str:
        """Config literal, e.g. '13^2:1,0,1'."""
        if self.m == 1:
            return str(self.p)
        return f"{self.p}^{self.m}:" + ",".join(str(c) for c in self.modulus)


class FieldElement:
    """Element of a FieldSpec, stored as a coefficient tuple."""

    __slots__ = ("spec", "coeffs", "_idx")

    def __init__(self, spec: FieldSpec, coeffs: tuple[int, ...]):
        self.spec = spec
        self.coeffs = coeffs
        self._idx = None

    def _check(self, other) -> FieldElement:
        if isinstance(other, int):
            return self.spec(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.spec is not self.spec and other.spec != self.spec:
            raise FieldMismatch(f"{self.spec} vs {other.spec}")
        return other

    def index(self) -> int:
        """Base-p digit encoding; the canonical sort key for elements."""
        if self._idx is None:
            acc = 0
            for c in reversed(self.coeffs):
                acc = acc * self.spec.p + c
            self._idx = acc
        return self._idx

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.spec.p
        return FieldElement(self.spec, tuple(
            (a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.spec.p
        return FieldElement(self.spec, tuple(
            (a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return self.spec(other) - self

    def __neg__(self):
        p = self.spec.p
        return FieldElement(self.spec, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        sp = self.spec
        p = sp.p
        m = sp.m
        a = self.coeffs
        b = other.coeffs
        if m == 1:
            return FieldElement(sp, ((a[0] * b[0]) % p,))
        acc = [0] * (2 * m - 1)
        for i in range(m):
            ai = a[i]
            if ai:
                for j in range(m):
                    acc[i + j] += ai * b[j]
        out = acc[:m]
        red = sp._red
        for k in range(m - 1):
            c = acc[m + k]
            if c:
                row = red[k]
                for j in range(m):
                    out[j] += c * row[j]
        return FieldElement(sp, tuple(v % p for v in out))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        """Multiplicative inverse via the extended Euclidean algorithm."""
        sp = self.spec
        p = sp.p
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if sp.m == 1:
            return FieldElement(sp, (pow(self.coeffs[0], -1, p),))
        # extended gcd of self against the modulus polynomial
        r0 = list(sp.modulus)
        r1 = list(self.coeffs)
        while len(r1) > 1 and r1[-1] == 0:
            r1.pop()
        s0, s1 = [0], [1]
        while len(r1) > 1 or r1[0] != 0:
            q, rem = _poly_divmod(r0, r1, p)
            # s0 - q*s1
            prod = [0] * (len(q) + len(s1) - 1)
            for i, qc in enumerate(q):
                if qc:
                    for j, sc in enumerate(s1):
                        prod[i + j] = (prod[i + j] + qc * sc) % p
            news = [0] * max(len(s0), len(prod))
            for i, c in enumerate(s0):
                news[i] = c
            for i, c in enumerate(prod):
                news[i] = (news[i] - c) % p
            r0, r1 = r1, rem
            s0, s1 = s1, news
        c = pow(r0[0], -1, p)
        inv = [(x * c) % p for x in s0]
        inv = inv[: sp.m] + [0] * (sp.m - len(inv))
        return FieldElement(sp, tuple(inv))

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by zero")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.spec(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.spec.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def multiplicative_order(self) -> int:
        """Least d >= 1 with self^d = 1, via the factored group order."""
        if self.is_zero():
            raise ZeroElement("order of zero is undefined")
        d = self.spec.size - 1
        for ell, _ in self.spec.order_factors():
            while d % ell == 0 and (self ** (d // ell)) == self.spec.one:
                d //= ell
        return d

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.spec(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.coeffs == other.coeffs and (
            self.spec is other.spec or self.spec == other.spec)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.spec.m == 1:
            return str(self.coeffs[0])
        return "[" + ",".join(str(c) for c in self.coeffs) + "]"


def mult_order(x: FieldElement) -> int:
    return x.multiplicative_order()


def parse_field(literal: str, max_size: int = DESK_SCALE_BOUND) -> FieldSpec:
    """Parse a field literal.

    Accepted forms: '13' (prime field), '13^2' (modulus found by the
    deterministic search), '13^2:1,0,1' (explicit modulus, constant term
    first, so '1,0,1' is x^2 + 1).
    """
    literal = literal.strip()
    if ":" in literal:
        head, tail = literal.split(":", 1)
        modulus = tuple(int(c) for c in tail.split(","))
    else:
        head, modulus = literal, None
    if "^" in head:
        ps, ms = head.split("^", 1)
        p, m = int(ps), int(ms)
    else:
        p, m = int(head), 1
    return FieldSpec(p, m, modulus=modulus, max_size=max_size)
