"""Fourier matrices, homogeneous MUH systems and planar-function constructions.

A homogeneous system is built from a flat matrix A and a Hadamard H: the
r-th Hadamard is diag(column r of A) H. With H the Fourier matrix of G and
A[l, r] = chi_r(f(l)) for a function f: G -> torus of N, the system is a
complete set of MUHs iff f satisfies the "most general" planarity condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DomainError, MubkitError, PreconditionError, StructuralError, UnsupportedDimensionError
from .field import FiniteField, half_square, prime_power
from .flatmat import DEFAULT_TOL, EXACT, FlatMatrix, RingMatrix, check_backend, is_hadamard
from .group import AbelianGroup, GroupElement, Scalar, TorusElement, character, torus_from_json, torus_to_json
from .mubcheck import BasisSystem, MUH_STANDARD, is_mub_system
from .verdict import Verdict

USLOVIE = "uslovie"
GENERAL = "general"
MOST_GENERAL = "most_general"
_LEVEL_ALIASES = {
    "uslovie": USLOVIE,
    "planar": USLOVIE,
    "general": GENERAL,
    "fractional": GENERAL,
    "most_general": MOST_GENERAL,
    "most-general": MOST_GENERAL,
}


@dataclass(frozen=True, eq=False)
class TorusFunction:
    """A total function from a group G into the torus extension of a group N."""

    domain: AbelianGroup
    codomain: AbelianGroup
    table: Mapping[GroupElement, TorusElement]

    def __post_init__(self):
        table = {}
        for g in self.domain.elements():
            if g not in self.table:
                raise StructuralError(f"function undefined at {g}")
            table[g] = self.codomain.reduce_torus(self.table[g])
        if len(self.table) != self.domain.order:
            raise StructuralError("table has entries outside the domain")
        object.__setattr__(self, "table", table)

    @classmethod
    def from_callable(cls, G: AbelianGroup, N: AbelianGroup, fn: Callable[[GroupElement], Sequence[Scalar]]):
        return cls(G, N, {g: tuple(fn(g)) for g in G.elements()})

    def __call__(self, g: Sequence[int]) -> TorusElement:
        return self.table[tuple(g)]

    def values(self) -> list[TorusElement]:
        return [self.table[g] for g in self.domain.elements()]

    @property
    def exact(self) -> bool:
        return not any(isinstance(c, float) for v in self.table.values() for c in v)

    def is_integer_valued(self, tol: float = 0.0) -> bool:
        for v in self.table.values():
            for c in v:
                if isinstance(c, float):
                    if abs(c - round(c)) > tol:
                        return False
                elif Fraction(c).denominator != 1:
                    return False
        return True

    def shifted(self, c: Sequence[Scalar]) -> TorusFunction:
        return TorusFunction(self.domain, self.codomain, {g: self.codomain.torus_add(v, c) for g, v in self.table.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TorusFunction)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.table == other.table
        )

    __hash__ = None

    def to_json(self) -> dict:
        return {
            "group": self.domain.to_json(),
            "codomain": self.codomain.to_json(),
            "table": [[list(g), torus_to_json(self.table[g])] for g in self.domain.elements()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> TorusFunction:
        try:
            G = AbelianGroup.from_json(obj["group"])
            N = AbelianGroup.from_json(obj.get("codomain", obj["group"]))
            table = {}
            for g, v in obj["table"]:
                table[G.reduce(g)] = torus_from_json(v)
            return cls(G, N, table)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, StructuralError):
                raise
            raise StructuralError(f"malformed function object: {exc}") from exc


# Fourier matrices


def fourier_matrix(G: AbelianGroup, normalized: bool = False) -> FlatMatrix:
    """Entry (i, j) = chi_j(i), rows and columns in element order of G."""
    elems = list(G.elements())
    N = G.exponent
    weights = [N // d for d in G.moduli]
    ph = np.array([[sum(a * b * w for a, b, w in zip(i, j, weights)) for j in elems] for i in elems], dtype=np.int64)
    return FlatMatrix(ph.reshape(G.order, G.order), N, normalized)


def shifted_fourier(G: AbelianGroup, X: Sequence[Sequence[Scalar]], tol: float = DEFAULT_TOL) -> FlatMatrix:
    """Rows indexed by torus points x in X, entries chi_j(x).

    Hadamard whenever all pairwise differences of X lie in the starred torus;
    that condition is checked and a violating pair is reported.
    """
    X = [G.reduce_torus(x) for x in X]
    if len(X) != G.order:
        raise StructuralError(f"need {G.order} points, got {len(X)}")
    for a in range(len(X)):
        for b in range(a + 1, len(X)):
            if not G.in_torus_star(G.torus_sub(X[a], X[b]), tol):
                raise PreconditionError(f"difference of {X[a]} and {X[b]} is not in the starred torus", (X[a], X[b]))
    elems = list(G.elements())
    return FlatMatrix.from_fractions([[character(j, x, G) for j in elems] for x in X])


# homogeneous systems


@dataclass(frozen=True)
class HomogeneousSpec:
    A: FlatMatrix
    H: FlatMatrix

    def __post_init__(self):
        if self.A.shape != self.H.shape or self.A.shape[0] != self.A.shape[1]:
            raise StructuralError(f"A {self.A.shape} and H {self.H.shape} must be square of one size")
        backend = EXACT if self.H.exact else "float"
        if not is_hadamard(self.H, backend):
            raise PreconditionError("H is not a Hadamard matrix")


def homogeneous_system(spec: HomogeneousSpec) -> list[FlatMatrix]:
    """The n normalized Hadamards diag(A[:, r]) H, r = 0..n-1."""
    A, H = spec.A, spec.H
    n = A.shape[0]
    if A.exact and H.exact:
        N = math.lcm(A.nroot, H.nroot)
        a, h = A.lift(N).phases, H.lift(N).phases
        return [FlatMatrix(a[:, r : r + 1] + h, N, True) for r in range(n)]
    a, h = A.turns(), H.turns()
    return [FlatMatrix(a[:, r : r + 1] + h, None, True) for r in range(n)]


def function_matrix(f: TorusFunction) -> FlatMatrix:
    """A[l, r] = chi_r(f(l)), rows l in G, columns r in N."""
    N = f.codomain
    cols = list(N.elements())
    return FlatMatrix.from_fractions([[character(r, f(l), N) for r in cols] for l in f.domain.elements()])


def mub_from_function(f: TorusFunction) -> list[FlatMatrix]:
    if f.domain.order != f.codomain.order:
        raise StructuralError(f"|G| = {f.domain.order} differs from |N| = {f.codomain.order}")
    return homogeneous_system(HomogeneousSpec(function_matrix(f), fourier_matrix(f.domain)))


def with_identity(mats: Sequence[FlatMatrix]) -> BasisSystem:
    n = mats[0].shape[0]
    return BasisSystem([RingMatrix.identity(n)] + list(mats), MUH_STANDARD)


# planarity


def _level(level: str) -> str:
    try:
        return _LEVEL_ALIASES[level]
    except KeyError:
        raise DomainError(f"unknown planarity level {level!r}") from None


def sum_classes(G: AbelianGroup) -> dict[GroupElement, list[tuple[GroupElement, GroupElement]]]:
    """For each s in G the multisets {g1, g2} with g1 + g2 = s (g1 first in element order)."""
    elems = list(G.elements())
    classes: dict = {s: [] for s in elems}
    for a in range(len(elems)):
        for b in range(a, len(elems)):
            classes[G.add(elems[a], elems[b])].append((elems[a], elems[b]))
    return classes


def check_planarity(f: TorusFunction, level: str = USLOVIE, tol: float = DEFAULT_TOL) -> Verdict:
    """Exhaustive test over quadruples with g1 + g2 = g3 + g4 and {g1, g2} != {g3, g4}.

    uslovie: f(g1) + f(g2) != f(g3) + f(g4) (f must be integer valued);
    general: the difference f(g1) + f(g2) - f(g3) - f(g4) lies in N*;
    most_general: the difference lies in the starred torus of N.
    The witness is the first violating quadruple (g1, g2, g3, g4).
    """
    level = _level(level)
    N = f.codomain
    if level == USLOVIE and not f.is_integer_valued(tol):
        raise DomainError("condition uslovie needs an integer-valued function into N")
    for pairs in sum_classes(f.domain).values():
        sums = [N.torus_add(f(a), f(b)) for a, b in pairs]
        for p in range(len(pairs)):
            for q in range(p + 1, len(pairs)):
                diff = N.torus_sub(sums[p], sums[q])
                if level == MOST_GENERAL:
                    good = N.in_torus_star(diff, tol)
                else:
                    good = N.in_star(diff, tol)
                if not good:
                    return Verdict(False, (*pairs[p], *pairs[q]))
    return Verdict(True, None)


def is_diff_uniform(f: TorusFunction, tol: float = 0.0) -> bool:
    """f(x + a) - f(x) = b has at most one solution whenever (a, b) != (0, 0)."""
    counts = _derivative_counts(f, tol)
    return all(c <= 1 for hist in counts.values() for c in hist.values())


def is_perfect_nonlinear(f: TorusFunction, tol: float = 0.0) -> bool:
    """f(x + a) - f(x) = b has exactly |G|/|N| solutions for every b and every a != 0."""
    G, N = f.domain, f.codomain
    if G.order % N.order:
        raise DomainError(f"|N| = {N.order} does not divide |G| = {G.order}")
    m = G.order // N.order
    counts = _derivative_counts(f, tol)
    return all(len(hist) == N.order and all(c == m for c in hist.values()) for hist in counts.values())


def _derivative_counts(f: TorusFunction, tol: float) -> dict:
    if not f.is_integer_valued(tol):
        raise DomainError("differential properties need an integer-valued function into N")
    G, N = f.domain, f.codomain
    vals = {g: N.reduce([round(c) for c in v]) for g, v in f.table.items()}
    out = {}
    for a in G.elements():
        if a == G.zero():
            continue
        hist: dict = {}
        for x in G.elements():
            b = N.sub(vals[G.add(x, a)], vals[x])
            hist[b] = hist.get(b, 0) + 1
        out[a] = hist
    return out


# field-based functions


def field_function(F: FiniteField, fn: Callable) -> TorusFunction:
    """A map GF(q) -> GF(q) viewed as Z_p^k -> Z_p^k."""
    G = F.additive_group
    return TorusFunction(G, G, {x: tuple(Fraction(c) for c in fn(x)) for x in F.elements()})


def square_function(F: FiniteField) -> TorusFunction:
    return field_function(F, lambda x: F.mul(x, x))


def half_square_function(F: FiniteField) -> TorusFunction:
    G = F.additive_group
    return TorusFunction(G, G, {x: half_square(x, F) for x in F.elements()})


def _field_element(F: FiniteField, u) -> tuple[int, ...]:
    if isinstance(u, int):
        return F.from_int(u)
    u = tuple(int(c) % F.p for c in u)
    if len(u) != F.k:
        raise DomainError(f"u must have {F.k} coefficients")
    return u


PLANAR_FAMILIES = ("dembowski-ostrom", "coulter-matthews", "ding-yuan")


def planar_family(
    name: str,
    p: int,
    k: int = 1,
    alpha: int | None = None,
    u=None,
    h: Sequence[int] | None = None,
) -> TorusFunction:
    """One of the three known families of planar functions on GF(p^k), p odd.

    * dembowski-ostrom: x^(p^alpha + 1), k / gcd(k, alpha) odd
    * coulter-matthews: x^((3^alpha + 1) / 2), p = 3, alpha odd, gcd(k, alpha) = 1
    * ding-yuan: x^10 - u x^6 - u^2 x^2, p = 3, k odd, u != 0
    """
    if p == 2:
        raise DomainError("planar families need an odd characteristic")
    F = FiniteField(p, k, tuple(h) if h is not None else None)
    if name == "dembowski-ostrom":
        alpha = 0 if alpha is None else alpha
        if alpha < 0 or (k // math.gcd(k, alpha)) % 2 == 0:
            raise DomainError(f"dembowski-ostrom needs alpha >= 0 with k/gcd(k, alpha) odd (k={k}, alpha={alpha})")
        e = p**alpha + 1
        f = field_function(F, lambda x: F.pow(x, e))
    elif name == "coulter-matthews":
        alpha = 1 if alpha is None else alpha
        if p != 3 or alpha < 1 or alpha % 2 == 0 or math.gcd(k, alpha) != 1:
            raise DomainError(f"coulter-matthews needs p=3, odd alpha, gcd(k, alpha)=1 (p={p}, k={k}, alpha={alpha})")
        e = (3**alpha + 1) // 2
        f = field_function(F, lambda x: F.pow(x, e))
    elif name == "ding-yuan":
        if p != 3 or k % 2 == 0:
            raise DomainError(f"ding-yuan needs p=3 and odd k (p={p}, k={k})")
        ue = _field_element(F, 1 if u is None else u)
        if not any(ue):
            raise DomainError("ding-yuan needs u != 0")
        u2 = F.mul(ue, ue)

        def dy(x):
            t = F.sub(F.pow(x, 10), F.mul(ue, F.pow(x, 6)))
            return F.sub(t, F.mul(u2, F.pow(x, 2)))

        f = field_function(F, dy)
    else:
        raise DomainError(f"unknown planar family {name!r} (choose from {', '.join(PLANAR_FAMILIES)})")
    verdict = check_planarity(f, USLOVIE)
    if not verdict.ok:
        raise PreconditionError(f"{name} function is not planar", verdict.witness)
    return f


# difference matrices


def difference_matrices(A: FlatMatrix, G: AbelianGroup, backend: str = EXACT, tol: float = DEFAULT_TOL) -> dict:
    """For each Delta != 0: the matrix with rows R_{i+Delta} o R_i^(-1) and its Hadamard verdict.

    Rows of A are indexed by G in element order. Returns
    ``{Delta: (D_Delta, is_hadamard)}``.
    """
    check_backend(backend)
    if A.shape[0] != G.order:
        raise StructuralError(f"A has {A.shape[0]} rows, G has {G.order} elements")
    elems = list(G.elements())
    out = {}
    for delta in elems:
        if delta == G.zero():
            continue
        idx = [G.index(G.add(i, delta)) for i in elems]
        if A.exact:
            D = FlatMatrix(A.phases[idx] - A.phases, A.nroot, False)
        else:
            D = FlatMatrix(A.turns()[idx] - A.turns(), None, False)
        if backend != EXACT:
            D = FlatMatrix(D.turns(), None, False)
        out[delta] = (D, is_hadamard(D, backend, tol))
    return out


# complete systems


def prime_power_mub(n: int, verify: bool = True) -> BasisSystem:
    """Identity plus n MUHs for n = p^k.

    Odd p uses f(x) = x^2 on GF(n); p = 2 uses x^2 / 2 lifted through the
    integers. The result is checked before it is returned.
    """
    pk = prime_power(n)
    if pk is None:
        raise UnsupportedDimensionError(f"{n} is not a prime power")
    p, k = pk
    F = FiniteField(p, k)
    f = square_function(F) if p != 2 else half_square_function(F)
    system = with_identity(mub_from_function(f))
    if verify:
        v = is_mub_system(system)
        if not v.is_complete:
            raise MubkitError(f"construction for n={n} failed self-verification: {v.failures[:3]}")
    return system
