"""Finite Abelian groups Z_d1 x ... x Z_dm, their real-torus extensions and characters.

Group elements are tuples of ints; torus elements are tuples of
``Fraction`` (exact mode) or ``float`` (float mode), each coordinate taken
modulo the matching modulus. Groups keep the factor order they were given.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence, Union

from .cyclotomic import CyclotomicInt
from .errors import StructuralError

Scalar = Union[Fraction, float]
GroupElement = tuple[int, ...]
TorusElement = tuple[Scalar, ...]
Phase = Scalar


def reduce_phase(x: Scalar) -> Phase:
    """Representative of x modulo 1 in [0, 1)."""
    if isinstance(x, float):
        r = x % 1.0
        return 0.0 if r == 1.0 else r
    return Fraction(x) % 1


@dataclass(frozen=True)
class AbelianGroup:
    moduli: tuple[int, ...]
    order: int = field(init=False, compare=False)

    def __post_init__(self):
        moduli = tuple(int(d) for d in self.moduli)
        if any(d < 1 for d in moduli):
            raise StructuralError(f"moduli must be >= 1, got {moduli}")
        object.__setattr__(self, "moduli", moduli)
        object.__setattr__(self, "order", math.prod(moduli))

    @classmethod
    def cyclic(cls, n: int) -> AbelianGroup:
        return cls((n,))

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def exponent(self) -> int:
        return math.lcm(1, *self.moduli)

    def elements(self) -> Iterator[GroupElement]:
        """All elements in lexicographic order of coordinates."""
        return itertools.product(*(range(d) for d in self.moduli))

    def zero(self) -> GroupElement:
        return (0,) * self.rank

    def index(self, g: Sequence[int]) -> int:
        """Position of g in :meth:`elements` order."""
        self._check(g)
        i = 0
        for x, d in zip(g, self.moduli):
            i = i * d + int(x) % d
        return i

    def element(self, index: int) -> GroupElement:
        coords = []
        for d in reversed(self.moduli):
            index, r = divmod(index, d)
            coords.append(r)
        return tuple(reversed(coords))

    def _check(self, g: Sequence) -> None:
        if len(g) != self.rank:
            raise StructuralError(f"element {tuple(g)} has {len(g)} coordinates, group has {self.rank}")

    def reduce(self, g: Sequence[int]) -> GroupElement:
        self._check(g)
        return tuple(int(x) % d for x, d in zip(g, self.moduli))

    def add(self, g: Sequence[int], h: Sequence[int]) -> GroupElement:
        self._check(g)
        self._check(h)
        return tuple((x + y) % d for x, y, d in zip(g, h, self.moduli))

    def neg(self, g: Sequence[int]) -> GroupElement:
        self._check(g)
        return tuple((-x) % d for x, d in zip(g, self.moduli))

    def sub(self, g: Sequence[int], h: Sequence[int]) -> GroupElement:
        return self.add(g, self.neg(h))

    def scale(self, c: int, g: Sequence[int]) -> GroupElement:
        self._check(g)
        return tuple((c * x) % d for x, d in zip(g, self.moduli))

    def element_order(self, g: Sequence[int]) -> int:
        self._check(g)
        return math.lcm(1, *(d // math.gcd(d, x) for x, d in zip(g, self.moduli)))

    def contains(self, g: Sequence[int]) -> bool:
        return len(g) == self.rank and all(
            isinstance(x, (int,)) and 0 <= x < d for x, d in zip(g, self.moduli)
        )

    # torus extension

    def reduce_torus(self, x: Sequence[Scalar]) -> TorusElement:
        self._check(x)
        out = []
        for v, d in zip(x, self.moduli):
            if isinstance(v, float):
                r = v % d
                out.append(0.0 if r == d else r)
            else:
                out.append(Fraction(v) % d)
        return tuple(out)

    def torus_add(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> TorusElement:
        self._check(x)
        self._check(y)
        return self.reduce_torus([a + b for a, b in zip(x, y)])

    def torus_sub(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> TorusElement:
        self._check(x)
        self._check(y)
        return self.reduce_torus([a - b for a, b in zip(x, y)])

    def in_torus_star(self, x: Sequence[Scalar], tol: float = 0.0) -> bool:
        """True iff some coordinate of x is an integer that is non-zero mod its modulus."""
        x = self.reduce_torus(x)
        for v, d in zip(x, self.moduli):
            if isinstance(v, float):
                k = round(v)
                if abs(v - k) <= tol and k % d != 0:
                    return True
            elif v.denominator == 1 and v != 0:
                return True
        return False

    def in_star(self, x: Sequence[Scalar], tol: float = 0.0) -> bool:
        """True iff x is an integer point of the torus other than zero (x in G*)."""
        x = self.reduce_torus(x)
        nonzero = False
        for v, d in zip(x, self.moduli):
            if isinstance(v, float):
                k = round(v)
                if abs(v - k) > tol:
                    return False
                nonzero = nonzero or k % d != 0
            else:
                if v.denominator != 1:
                    return False
                nonzero = nonzero or v != 0
        return nonzero

    def to_json(self) -> dict:
        return {"moduli": list(self.moduli)}

    @classmethod
    def from_json(cls, obj: dict) -> AbelianGroup:
        try:
            return cls(tuple(obj["moduli"]))
        except (KeyError, TypeError) as exc:
            raise StructuralError(f"bad group spec {obj!r}") from exc


def group_add(g: Sequence[int], h: Sequence[int], G: AbelianGroup) -> GroupElement:
    return G.add(g, h)


def character(a: Sequence[Scalar], b: Sequence[Scalar], G: AbelianGroup) -> Phase:
    """Phase of chi_a(b): sum_j a_j b_j / d_j modulo 1."""
    G._check(a)
    G._check(b)
    if any(isinstance(v, float) for v in (*a, *b)):
        return reduce_phase(sum(float(x) * float(y) / d for x, y, d in zip(a, b, G.moduli)))
    return reduce_phase(sum((Fraction(x) * y / d for x, y, d in zip(a, b, G.moduli)), Fraction(0)))


def character_sum(x: Sequence[Scalar], G: AbelianGroup) -> CyclotomicInt | complex:
    """sum over y in G of chi_y(x): a CyclotomicInt for rational x, else a complex number."""
    phases = [character(y, x, G) for y in G.elements()]
    if any(isinstance(p, float) for p in phases):
        return sum((cmath.exp(2j * cmath.pi * float(p)) for p in phases), 0j)
    return CyclotomicInt.from_phases(phases)


def character_sum_is_zero(x: Sequence[Scalar], G: AbelianGroup, tol: float = 1e-9) -> bool:
    s = character_sum(x, G)
    if isinstance(s, CyclotomicInt):
        return s.is_zero()
    return abs(s) <= tol


def torus_from_json(obj: Sequence) -> TorusElement:
    """Coordinates given as [num, den] pairs, ints, or floats."""
    out = []
    for c in obj:
        if isinstance(c, (list, tuple)):
            if len(c) != 2:
                raise StructuralError(f"rational coordinate must be [num, den], got {c!r}")
            out.append(Fraction(int(c[0]), int(c[1])))
        elif isinstance(c, bool):
            raise StructuralError(f"bad coordinate {c!r}")
        elif isinstance(c, int):
            out.append(Fraction(c))
        elif isinstance(c, float):
            out.append(c)
        elif isinstance(c, str):
            out.append(Fraction(c))
        else:
            raise StructuralError(f"bad coordinate {c!r}")
    return tuple(out)


def torus_to_json(x: Sequence[Scalar]) -> list:
    out = []
    for v in x:
        if isinstance(v, float):
            out.append(v)
        else:
            v = Fraction(v)
            out.append([v.numerator, v.denominator])
    return out
