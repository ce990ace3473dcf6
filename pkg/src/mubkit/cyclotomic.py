"""Exact arithmetic in the group ring Z[C_N] and the cyclotomic integers Z[zeta_N].

An element is stored as a length-N integer vector ``c`` standing for
``sum(c[j] * zeta_N**j)``. Two vectors denote the same complex number iff
their difference is divisible by the N-th cyclotomic polynomial, so every
zero test reduces modulo Phi_N.

The array helpers work on the last axis of numpy arrays so that whole Gram
matrices can be tested at once. Integer dtypes are chosen from coefficient
bounds; when a result could overflow int64 the computation falls back to
Python integers (``dtype=object``).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np

_INT64_SAFE = 2**62
_FLOAT_EXACT = 2**52


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Long division of integer polynomials (ascending coefficients), den monic."""
    num = list(num)
    dn = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    if len(num) - 1 < dn:
        return [0], num
    quot = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            quot[i - dn] = c
            for j in range(dn + 1):
                num[i - dn + j] -= c * den[j]
    rem = num[:dn] or [0]
    return quot, rem


def _mobius(n: int) -> int:
    out, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    return -out if n > 1 else out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (ascending) of Phi_n = prod over d | n of (x^d - 1)^mu(n/d).

    Multiplications by x^d - 1 come first, then the exact divisions, each a
    linear pass over the coefficients.
    """
    if n < 1:
        raise ValueError("order must be positive")
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    poly = [1]
    for d in divisors:
        if _mobius(n // d) == 1:
            out = [0] * (len(poly) + d)
            for i, c in enumerate(poly):
                out[i + d] += c
                out[i] -= c
            poly = out
    for d in divisors:
        if _mobius(n // d) == -1:
            # q (x^d - 1) = poly, solved from the top coefficient down
            q = [0] * (len(poly) - d)
            rem = list(poly)
            for i in range(len(rem) - 1, d - 1, -1):
                c = rem[i]
                if c:
                    q[i - d] = c
                    rem[i] -= c
                    rem[i - d] += c
            assert not any(rem), "x^n - 1 not divisible by a cyclotomic factor"
            poly = q
    return tuple(poly)


def euler_phi(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


@lru_cache(maxsize=None)
def reduction_matrix(n: int) -> np.ndarray:
    """Integer (n, phi(n)) matrix whose row j is x^j mod Phi_n."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rows = np.zeros((n, deg), dtype=np.int64)
    cur = [0] * deg
    cur[0] = 1
    for j in range(n):
        rows[j] = cur
        # multiply by x and reduce the overflow term with the monic Phi_n
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi[:deg])]
    rows.setflags(write=False)
    return rows


def _max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(np.max(np.abs(a)))


def _promote(a: np.ndarray, bound: int) -> np.ndarray:
    if bound >= _INT64_SAFE or a.dtype == object:
        return a.astype(object)
    return a.astype(np.int64, copy=False)


def ring_reduce(arr: np.ndarray, n: int) -> np.ndarray:
    """Coordinates of ``arr`` (last axis length n) in the power basis of Q(zeta_n)."""
    red = reduction_matrix(n)
    bound = _max_abs(arr) * n * max(1, _max_abs(red))
    arr = _promote(np.asarray(arr), bound)
    if arr.dtype == object:
        return np.dot(arr, red.astype(object))
    return arr @ red


def ring_is_zero(arr: np.ndarray, n: int) -> np.ndarray:
    """Boolean mask over leading axes: which entries vanish as complex numbers."""
    red = ring_reduce(arr, n)
    return np.all(red == 0, axis=-1)


def ring_rational(arr: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Return (mask, value): entries that are integers, and their value."""
    red = ring_reduce(arr, n)
    if red.shape[-1] == 1:
        return np.ones(red.shape[:-1], dtype=bool), red[..., 0]
    mask = np.all(red[..., 1:] == 0, axis=-1)
    return mask, red[..., 0]


def ring_conj(arr: np.ndarray) -> np.ndarray:
    n = arr.shape[-1]
    return arr[..., (-np.arange(n)) % n]


def ring_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cyclic convolution along the last axis (broadcasting over the rest)."""
    n = a.shape[-1]
    if b.shape[-1] != n:
        raise ValueError("ring orders differ")
    bound = _max_abs(a) * _max_abs(b) * n
    a = _promote(np.asarray(a), bound)
    b = _promote(np.asarray(b), bound)
    out = None
    for s in range(n):
        term = a[..., s : s + 1] * np.roll(b, s, axis=-1)
        out = term if out is None else out + term
    return out


def ring_pow(a: np.ndarray, k: int) -> np.ndarray:
    if k < 1:
        raise ValueError("exponent must be positive")
    out = a
    for _ in range(k - 1):
        out = ring_mul(out, a)
    return out


def ring_lift(arr: np.ndarray, n: int, m: int) -> np.ndarray:
    """Re-express order-n elements as order-m elements (n divides m)."""
    if m % n:
        raise ValueError(f"{n} does not divide {m}")
    if m == n:
        return arr
    out = np.zeros(arr.shape[:-1] + (m,), dtype=arr.dtype)
    out[..., :: m // n] = arr
    return out


def ring_gram(u: np.ndarray, v: np.ndarray, weights: np.ndarray | None = None) -> np.ndarray:
    """Sum over the first axis of conj(u) * w * v for every column pair.

    ``u`` has shape (L, a, N), ``v`` (L, b, N); ``weights`` are optional
    integers of shape (L,). The result has shape (a, b, N).
    """
    L, a, n = u.shape
    _, b, _ = v.shape
    if weights is not None:
        weights = np.asarray(weights)
        wmax = _max_abs(weights)
        v = _promote(v, _max_abs(v) * wmax) * weights.reshape(L, 1, 1)
    bound = _max_abs(u) * _max_abs(v) * max(L, 1) * n
    if bound < _FLOAT_EXACT:
        dtype = np.float64
    elif bound < _INT64_SAFE:
        dtype = np.int64
    else:
        dtype = object
    ub = ring_conj(u).astype(dtype)
    v = v.astype(dtype)
    out = np.zeros((a, b * n), dtype=dtype)
    # one shift at a time keeps memory at O(L * b * n)
    for s in range(n):
        left = ub[:, :, s].T
        if dtype is not object and not left.any():
            continue
        right = np.roll(v, s, axis=-1).reshape(L, b * n)
        out += np.dot(left, right)
    if dtype is np.float64:
        out = np.rint(out).astype(np.int64)
    return out.reshape(a, b, n)


def ring_to_complex(arr: np.ndarray, n: int) -> np.ndarray:
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    return np.asarray(arr, dtype=np.complex128) @ roots


def one_hot(phases: np.ndarray, n: int) -> np.ndarray:
    """Integer phases (exponents of zeta_n) to group-ring arrays."""
    phases = np.asarray(phases, dtype=np.int64) % n
    out = np.zeros(phases.shape + (n,), dtype=np.int64)
    np.put_along_axis(out, phases[..., None], 1, axis=-1)
    return out


class CyclotomicInt:
    """An integer combination of N-th roots of unity."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[int] | None = None):
        if order < 1:
            raise ValueError("order must be positive")
        coeffs = [0] * order if coeffs is None else [int(c) for c in coeffs]
        if len(coeffs) != order:
            raise ValueError(f"expected {order} coefficients, got {len(coeffs)}")
        self.order = order
        self.coeffs = tuple(coeffs)

    @classmethod
    def root(cls, order: int, power: int = 0) -> CyclotomicInt:
        c = [0] * order
        c[power % order] = 1
        return cls(order, c)

    @classmethod
    def from_int(cls, value: int, order: int = 1) -> CyclotomicInt:
        return cls.root(order, 0) * value

    @classmethod
    def from_phases(cls, phases: Iterable[Fraction], order: int | None = None) -> CyclotomicInt:
        """Sum of exp(2*pi*i*phase) over rational phases."""
        phases = [Fraction(p) for p in phases]
        if order is None:
            order = math.lcm(1, *(p.denominator for p in phases))
        c = [0] * order
        for p in phases:
            k = p * order
            if k.denominator != 1:
                raise ValueError(f"phase {p} is not a multiple of 1/{order}")
            c[int(k) % order] += 1
        return cls(order, c)

    @classmethod
    def from_array(cls, arr) -> CyclotomicInt:
        arr = np.asarray(arr)
        return cls(arr.shape[-1], (int(x) for x in arr))

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=object if self._big() else np.int64)

    def _big(self) -> bool:
        return any(abs(c) >= _INT64_SAFE for c in self.coeffs)

    def lift(self, order: int) -> CyclotomicInt:
        if order % self.order:
            raise ValueError(f"{self.order} does not divide {order}")
        step = order // self.order
        c = [0] * order
        for j, x in enumerate(self.coeffs):
            c[j * step] = x
        return CyclotomicInt(order, c)

    def _common(self, other: CyclotomicInt) -> tuple[CyclotomicInt, CyclotomicInt]:
        m = math.lcm(self.order, other.order)
        return self.lift(m), other.lift(m)

    def _coerce(self, other) -> CyclotomicInt | None:
        if isinstance(other, CyclotomicInt):
            return other
        if isinstance(other, (int, np.integer)):
            return CyclotomicInt.from_int(int(other), self.order)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        return CyclotomicInt(a.order, (x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> CyclotomicInt:
        return CyclotomicInt(self.order, (-x for x in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return CyclotomicInt(self.order, (x * int(other) for x in self.coeffs))
        if not isinstance(other, CyclotomicInt):
            return NotImplemented
        a, b = self._common(other)
        n = a.order
        c = [0] * n
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        c[(i + j) % n] += x * y
        return CyclotomicInt(n, c)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> CyclotomicInt:
        if k < 0:
            raise ValueError("negative powers are not integral in general")
        out = CyclotomicInt.from_int(1, self.order)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self) -> CyclotomicInt:
        n = self.order
        return CyclotomicInt(n, (self.coeffs[(-j) % n] for j in range(n)))

    def abs_sq(self) -> CyclotomicInt:
        return self.conjugate() * self

    def reduced(self) -> tuple[int, ...]:
        """Coordinates in the power basis 1, zeta, ..., zeta^(phi-1)."""
        _, rem = _poly_divmod(list(self.coeffs), list(cyclotomic_poly(self.order)))
        deg = euler_phi(self.order)
        rem = rem + [0] * (deg - len(rem))
        return tuple(rem[:deg])

    def is_zero(self) -> bool:
        return not any(self.reduced())

    def rational_value(self) -> int | None:
        """The integer value if this element is rational, else None."""
        red = self.reduced()
        if any(red[1:]):
            return None
        return red[0]

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # equality is up to the cyclotomic relation

    def __complex__(self) -> complex:
        n = self.order
        return sum((c * cmath.exp(2j * cmath.pi * j / n) for j, c in enumerate(self.coeffs) if c), 0j)

    def __abs__(self) -> float:
        return abs(complex(self))

    def __repr__(self) -> str:
        return f"CyclotomicInt({self.order}, {list(self.coeffs)})"
