"""GF(p^k) in polynomial basis.

Field elements are tuples of k integers in [0, p), ascending powers of x, so
the additive group of the field is literally ``AbelianGroup((p,) * k)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import DomainError, StructuralError
from .group import AbelianGroup, TorusElement

FieldElement = tuple[int, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(n: int) -> tuple[int, int] | None:
    """(p, k) with n = p^k, or None."""
    if n < 2:
        return None
    p = 2
    while p * p <= n and n % p:
        p += 1
    if n % p:
        p = n
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else None


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod_p(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo monic m over Z_p."""
    a = [x % p for x in a]
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _trim(a[:dm])


def _monic_polys(p: int, deg: int) -> Iterator[list[int]]:
    """Monic polynomials of the given degree, by increasing value sum c_i p^i."""
    for low in itertools.product(range(p), repeat=deg):
        yield list(reversed(low)) + [1]


def is_irreducible(h: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(h)/2."""
    h = [x % p for x in h]
    k = len(h) - 1
    if k < 1 or h[-1] != 1:
        return False
    for d in range(1, k // 2 + 1):
        for q in _monic_polys(p, d):
            if not _polymod_p(h, q, p):
                return False
    return True


def default_modulus(p: int, k: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree k, ordered by sum c_i p^i."""
    for h in _monic_polys(p, k):
        if is_irreducible(h, p):
            return tuple(h)
    raise AssertionError("no irreducible polynomial found")  # unreachable for prime p


@dataclass(frozen=True)
class FiniteField:
    p: int
    k: int = 1
    h: tuple[int, ...] | None = None
    order: int = field(init=False, compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")
        if self.k < 1:
            raise DomainError("extension degree must be >= 1")
        if self.h is None:
            object.__setattr__(self, "h", default_modulus(self.p, self.k))
        else:
            h = tuple(int(c) % self.p for c in self.h)
            if len(h) != self.k + 1 or h[-1] != 1:
                raise DomainError(f"h must be monic of degree {self.k}")
            if not is_irreducible(h, self.p):
                raise DomainError(f"h = {list(h)} is reducible over Z_{self.p}")
            object.__setattr__(self, "h", h)
        object.__setattr__(self, "order", self.p**self.k)

    @property
    def additive_group(self) -> AbelianGroup:
        return AbelianGroup((self.p,) * self.k)

    def elements(self) -> Iterator[FieldElement]:
        return self.additive_group.elements()

    def zero(self) -> FieldElement:
        return (0,) * self.k

    def one(self) -> FieldElement:
        return (1,) + (0,) * (self.k - 1)

    def from_int(self, n: int) -> FieldElement:
        """Element whose coefficients are the base-p digits of n (lowest first)."""
        out = []
        for _ in range(self.k):
            n, r = divmod(n, self.p)
            out.append(r)
        if n:
            raise DomainError("integer too large for this field")
        return tuple(out)

    def _check(self, a: Sequence[int]) -> None:
        if len(a) != self.k:
            raise StructuralError(f"field element {tuple(a)} must have {self.k} coefficients")

    def add(self, a: Sequence[int], b: Sequence[int]) -> FieldElement:
        self._check(a)
        self._check(b)
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a: Sequence[int]) -> FieldElement:
        self._check(a)
        return tuple((-x) % self.p for x in a)

    def sub(self, a: Sequence[int], b: Sequence[int]) -> FieldElement:
        return self.add(a, self.neg(b))

    def mul(self, a: Sequence[int], b: Sequence[int]) -> FieldElement:
        self._check(a)
        self._check(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        rem = _polymod_p(prod, self.h, self.p)
        return tuple(rem + [0] * (self.k - len(rem)))

    def scalar(self, c: int, a: Sequence[int]) -> FieldElement:
        self._check(a)
        return tuple((c * x) % self.p for x in a)

    def pow(self, a: Sequence[int], e: int) -> FieldElement:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one()
        base = tuple(a)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: Sequence[int]) -> FieldElement:
        self._check(a)
        if not any(a):
            raise DomainError("zero has no multiplicative inverse")
        return self.pow(a, self.order - 2)


def ff_add(a, b, F: FiniteField) -> FieldElement:
    return F.add(a, b)


def ff_mul(a, b, F: FiniteField) -> FieldElement:
    return F.mul(a, b)


def ff_neg(a, F: FiniteField) -> FieldElement:
    return F.neg(a)


def ff_inv(a, F: FiniteField) -> FieldElement:
    return F.inv(a)


def half_square(x: Sequence[int], F: FiniteField) -> TorusElement:
    """x^2 / 2 for x in GF(2^k), as a point of the torus R_2^k.

    x is lifted to a 0/1 integer polynomial and squared over Z. The square is
    reduced modulo h by integer long division (h is monic, so no fractions
    appear), halved, and each coefficient is taken modulo 2.
    """
    if F.p != 2:
        raise DomainError("half_square needs characteristic 2")
    F._check(x)
    k = F.k
    sq = [0] * (2 * k - 1)
    for i, a in enumerate(x):
        for j, b in enumerate(x):
            sq[i + j] += a * b
    h = F.h
    for i in range(len(sq) - 1, k - 1, -1):
        c = sq[i]
        if c:
            for j in range(k + 1):
                sq[i - k + j] -= c * h[j]
    return tuple(Fraction(c, 2) % 2 for c in sq[:k])
