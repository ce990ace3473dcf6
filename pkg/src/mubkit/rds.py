"""Relative difference sets and their correspondence with fractional planar functions.

A semiregular relative (n, n, n, 1)-difference set in K relative to N
exists iff a fractional planar function G -> torus of N exists, G = K/N.
The bridge is the group K' on G x N whose addition carries s_i into N
whenever the i-th coordinate of G wraps around.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Protocol, Sequence

from .constructions import GENERAL, TorusFunction, check_planarity
from .errors import PreconditionError, StructuralError
from .group import AbelianGroup, GroupElement


class FiniteAbelian(Protocol):
    order: int

    def elements(self) -> Iterator[GroupElement]: ...
    def zero(self) -> GroupElement: ...
    def add(self, g: Sequence[int], h: Sequence[int]) -> GroupElement: ...
    def neg(self, g: Sequence[int]) -> GroupElement: ...
    def sub(self, g: Sequence[int], h: Sequence[int]) -> GroupElement: ...
    def contains(self, g: Sequence[int]) -> bool: ...


@dataclass(frozen=True)
class CarryGroup:
    """G x N with addition (x; y) + (z; t) = (x + z; y + t + s [x + z >= d]).

    ``s[j][i]`` is the j-th coordinate in N of d_i g_i. Elements are flat
    tuples (x_1..x_m, y_1..y_m').
    """

    G: AbelianGroup
    N: AbelianGroup
    s: tuple[tuple[int, ...], ...]
    order: int = field(init=False, compare=False)

    def __post_init__(self):
        s = tuple(tuple(int(v) % dn for v in row) for row, dn in zip(self.s, self.N.moduli))
        if len(s) != self.N.rank or any(len(row) != self.G.rank for row in s):
            raise StructuralError(f"carry matrix must be {self.N.rank} x {self.G.rank}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "order", self.G.order * self.N.order)

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.G.moduli + self.N.moduli

    def elements(self) -> Iterator[GroupElement]:
        return itertools.product(*(range(d) for d in self.moduli))

    def zero(self) -> GroupElement:
        return (0,) * len(self.moduli)

    def split(self, u: Sequence[int]) -> tuple[GroupElement, GroupElement]:
        m = self.G.rank
        return tuple(u[:m]), tuple(u[m:])

    def _carry_add(self, y, t, carry) -> GroupElement:
        return tuple(
            (a + b + sum(sj * c for sj, c in zip(row, carry))) % dn
            for a, b, row, dn in zip(y, t, self.s, self.N.moduli)
        )

    def add(self, u: Sequence[int], v: Sequence[int]) -> GroupElement:
        x, y = self.split(u)
        z, t = self.split(v)
        carry = [int(a + b >= d) for a, b, d in zip(x, z, self.G.moduli)]
        return self.G.add(x, z) + self._carry_add(y, t, carry)

    def neg(self, u: Sequence[int]) -> GroupElement:
        x, y = self.split(u)
        carry = [int(a != 0) for a in x]
        minus_s = self._carry_add(self.N.zero(), self.N.zero(), carry)
        return self.G.neg(x) + self.N.neg(self.N.add(y, minus_s))

    def sub(self, u: Sequence[int], v: Sequence[int]) -> GroupElement:
        return self.add(u, self.neg(v))

    def contains(self, u: Sequence[int]) -> bool:
        return len(u) == len(self.moduli) and all(isinstance(a, int) and 0 <= a < d for a, d in zip(u, self.moduli))

    def reduce(self, u: Sequence[int]) -> GroupElement:
        if len(u) != len(self.moduli):
            raise StructuralError(f"element {tuple(u)} has wrong length")
        return tuple(int(a) % d for a, d in zip(u, self.moduli))

    def psi(self, u: Sequence[int]) -> tuple[Fraction, ...]:
        """The morphism (x; y) -> y + S x into the torus of N."""
        x, y = self.split(u)
        return self.N.reduce_torus([Fraction(yj) + sum(Fraction(sj, d) * xi for sj, xi, d in zip(row, x, self.G.moduli)) for yj, row in zip(y, self.s)])

    def structure_matrix(self) -> list[list[Fraction]]:
        return structure_matrix(self.s, self.G.moduli)

    def subgroup_N(self) -> list[GroupElement]:
        return [self.G.zero() + y for y in self.N.elements()]

    def to_json(self) -> dict:
        return {"carry": {"G": list(self.G.moduli), "N": list(self.N.moduli), "s": [list(r) for r in self.s]}}


def structure_matrix(s: Sequence[Sequence[int]], domain_moduli: Sequence[int]) -> list[list[Fraction]]:
    """S[j][i] = s[j][i] / d_i, d_i the i-th modulus of G."""
    return [[Fraction(v, d) for v, d in zip(row, domain_moduli)] for row in s]


def group_from_json(obj: dict) -> AbelianGroup | CarryGroup:
    if "carry" in obj:
        c = obj["carry"]
        return CarryGroup(AbelianGroup(tuple(c["G"])), AbelianGroup(tuple(c["N"])), tuple(tuple(r) for r in c["s"]))
    return AbelianGroup.from_json(obj)


# relative difference sets


@dataclass(frozen=True)
class RelativeDifferenceSet:
    K: AbelianGroup | CarryGroup
    N: tuple[GroupElement, ...]
    R: tuple[GroupElement, ...]
    params: tuple[int, int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "N", tuple(tuple(int(c) for c in g) for g in self.N))
        object.__setattr__(self, "R", tuple(tuple(int(c) for c in g) for g in self.R))
        object.__setattr__(self, "params", tuple(int(v) for v in self.params))
        if len(self.params) != 4:
            raise StructuralError("params must be (m, n, r, lambda)")
        for g in self.N + self.R:
            if not self.K.contains(g):
                raise StructuralError(f"{g} is not an element of K")

    @property
    def semiregular(self) -> bool:
        m, _, r, _ = self.params
        return r == m

    def to_json(self) -> dict:
        return {
            "K": self.K.to_json(),
            "N": [list(g) for g in self.N],
            "R": [list(g) for g in self.R],
            "params": list(self.params),
        }

    @classmethod
    def from_json(cls, obj: dict) -> RelativeDifferenceSet:
        try:
            K = group_from_json(obj["K"])
            N = obj["N"]
            if isinstance(N, dict):
                # {0} x N in product form: N's moduli are the trailing factors of K
                tail = tuple(N["moduli"])
                if tuple(K.moduli[len(K.moduli) - len(tail) :]) != tail:
                    raise StructuralError(f"N moduli {tail} are not the trailing factors of K")
                head = (0,) * (len(K.moduli) - len(tail))
                N = [head + y for y in AbelianGroup(tail).elements()]
            return cls(K, tuple(map(tuple, N)), tuple(map(tuple, obj["R"])), tuple(obj["params"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, StructuralError):
                raise
            raise StructuralError(f"malformed difference set object: {exc}") from exc


@dataclass(frozen=True)
class RdsReport:
    ok: bool
    zero_count: int
    forbidden_counts: dict
    outside_counts: dict
    witness: dict | None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "zero_count": self.zero_count,
            "forbidden_counts": sorted([list(k), v] for k, v in self.forbidden_counts.items()),
            "outside_counts": sorted([list(k), v] for k, v in self.outside_counts.items()),
            "witness": self.witness,
        }


def is_subgroup(K: FiniteAbelian, H: Sequence[GroupElement]) -> bool:
    Hs = set(map(tuple, H))
    if K.zero() not in Hs:
        return False
    return all(K.sub(a, b) in Hs for a in Hs for b in Hs)


def verify_rds(D: RelativeDifferenceSet) -> RdsReport:
    """Count r1 - r2 over ordered pairs of R and compare with the definition.

    Zero must be hit |R| times (the diagonal pairs), non-zero elements of N
    never, and every element outside N exactly lambda times.
    """
    K = D.K
    Nset = set(D.N)
    if len(Nset) != len(D.N) or not is_subgroup(K, D.N):
        raise StructuralError("N is not a subgroup of K")
    m, n, r, lam = D.params
    witness = None
    if K.order != n * m:
        witness = {"kind": "order", "detail": f"|K| = {K.order} != n*m = {n * m}"}
    elif len(Nset) != n:
        witness = {"kind": "order", "detail": f"|N| = {len(Nset)} != n = {n}"}
    elif len(set(D.R)) != len(D.R) or len(D.R) != r:
        witness = {"kind": "size", "detail": f"R has {len(set(D.R))} distinct elements, r = {r}"}
    counts: dict = {}
    for a in D.R:
        for b in D.R:
            d = K.sub(a, b)
            counts[d] = counts.get(d, 0) + 1
    zero = K.zero()
    zero_count = counts.get(zero, 0)
    forbidden = {g: counts.get(g, 0) for g in sorted(Nset) if g != zero}
    outside = {g: counts.get(g, 0) for g in K.elements() if g not in Nset}
    if witness is None:
        if zero_count != len(D.R):
            witness = {"kind": "zero", "element": list(zero), "count": zero_count}
        else:
            bad = next((g for g, c in forbidden.items() if c), None)
            if bad is not None:
                witness = {"kind": "forbidden", "element": list(bad), "count": forbidden[bad]}
            else:
                bad = next((g for g, c in outside.items() if c != lam), None)
                if bad is not None:
                    witness = {"kind": "outside", "element": list(bad), "count": outside[bad], "expected": lam}
    return RdsReport(witness is None, zero_count, forbidden, outside, witness)


# presentations of K / N


def _scale(K: FiniteAbelian, c: int, g: GroupElement) -> GroupElement:
    out, base = K.zero(), g
    while c:
        if c & 1:
            out = K.add(out, base)
        base = K.add(base, base)
        c >>= 1
    return out


def _span(K: FiniteAbelian, gens: Sequence[GroupElement], moduli: Sequence[int]) -> dict:
    """Map element -> coordinate tuple over the given generators (first hit wins)."""
    out: dict = {}
    for coords in itertools.product(*(range(d) for d in moduli)):
        g = K.zero()
        for c, h in zip(coords, gens):
            g = K.add(g, _scale(K, c, h))
        out.setdefault(g, coords)
    return out


def find_basis(
    K: FiniteAbelian,
    elements: Sequence[GroupElement],
    reduce,
    moduli: Sequence[int] | None = None,
) -> tuple[tuple[int, ...], list[GroupElement]]:
    """A basis of the finite Abelian group on ``elements`` with addition ``reduce(K.add(a, b))``.

    Without ``moduli`` the cyclic factors are taken greedily by maximal order
    (each factor a direct summand), giving non-increasing moduli. With
    ``moduli`` a backtracking search looks for generators of exactly those
    orders that span a subgroup of full size. Candidates are tried in the
    order of ``elements``, so the result is deterministic.
    """
    elements = list(elements)
    zero = reduce(K.zero())

    def add(a, b):
        return reduce(K.add(a, b))

    def order_of(g):
        k, x = 1, g
        while x != zero:
            x = add(x, g)
            k += 1
        return k

    def span(gens, mods):
        out = {zero}
        for g, d in zip(gens, mods):
            multiples = [zero]
            for _ in range(d - 1):
                multiples.append(add(multiples[-1], g))
            out = {add(a, b) for a in out for b in multiples}
        return out

    orders = {g: order_of(g) for g in elements}
    target = len(elements)
    if moduli is None:
        gens, mods = [], []
        H = {zero}
        while len(H) < target:
            def rel_order(g):
                k, x = 1, g
                while x not in H:
                    x = add(x, g)
                    k += 1
                return k

            e = max(rel_order(g) for g in elements)
            pick = next(g for g in elements if orders[g] == e and rel_order(g) == e)
            gens.append(pick)
            mods.append(e)
            H = span(gens, mods)
        return tuple(mods), gens

    moduli = tuple(int(d) for d in moduli)
    if math.prod(moduli) != target:
        raise PreconditionError(f"moduli {moduli} do not multiply to the group order {target}")

    def search(i, gens, H):
        if i == len(moduli):
            return list(gens)
        for g in elements:
            if orders[g] != moduli[i]:
                continue
            H2 = span([g], [moduli[i]])
            H2 = {add(a, b) for a in H for b in H2}
            if len(H2) != len(H) * moduli[i]:
                continue
            found = search(i + 1, gens + [g], H2)
            if found is not None:
                return found
        return None

    found = search(0, [], {zero})
    if found is None:
        raise PreconditionError(f"the group is not isomorphic to Z_{moduli}")
    return moduli, found


@dataclass(frozen=True)
class Presentation:
    """K described as K' = G x N with carries; G = K/N and N in factor form."""

    K: FiniteAbelian
    G: AbelianGroup
    N: AbelianGroup
    g: tuple[GroupElement, ...]
    n_gens: tuple[GroupElement, ...]
    s: tuple[tuple[int, ...], ...]
    n_coords: dict = field(repr=False, compare=False)

    @property
    def carry_group(self) -> CarryGroup:
        return CarryGroup(self.G, self.N, self.s)

    @property
    def S(self) -> list[list[Fraction]]:
        return structure_matrix(self.s, self.G.moduli)

    def phi(self, u: Sequence[int]) -> GroupElement:
        """(x; y) -> y + sum x_i g_i."""
        m = self.G.rank
        x, y = u[:m], u[m:]
        out = self.K.zero()
        for c, h in zip(y, self.n_gens):
            out = self.K.add(out, _scale(self.K, c, h))
        for c, h in zip(x, self.g):
            out = self.K.add(out, _scale(self.K, c, h))
        return out

    def phi_inv(self, k: Sequence[int], x: Sequence[int]) -> GroupElement:
        """The preimage (x; y) of k, where x is the image of k in G."""
        rest = tuple(k)
        for c, h in zip(x, self.g):
            rest = self.K.sub(rest, _scale(self.K, c, h))
        if rest not in self.n_coords:
            raise StructuralError(f"{tuple(k)} is not in the coset of {tuple(x)}")
        return tuple(x) + self.n_coords[rest]


def _coset_rep(K: FiniteAbelian, N: Sequence[GroupElement]):
    cache: dict = {}

    def rep(g):
        g = tuple(g)
        if g not in cache:
            cache[g] = min(K.add(g, h) for h in N)
        return cache[g]

    return rep


def present(
    K: FiniteAbelian,
    N: Sequence[GroupElement],
    G_moduli: Sequence[int] | None = None,
    N_moduli: Sequence[int] | None = None,
) -> Presentation:
    """Choose generators of K/N (lexicographically smallest coset representatives) and of N."""
    N = [tuple(h) for h in N]
    rep = _coset_rep(K, N)
    reps = sorted({rep(g) for g in K.elements()})
    gmods, gens = find_basis(K, reps, rep, G_moduli)
    nmods, ngens = find_basis(K, sorted(N), lambda x: tuple(x), N_moduli)
    n_coords = _span(K, ngens, nmods)
    s_cols = []
    for g, d in zip(gens, gmods):
        s_cols.append(n_coords[_scale(K, d, g)])
    s = tuple(tuple(col[j] for col in s_cols) for j in range(len(nmods)))
    return Presentation(K, AbelianGroup(gmods), AbelianGroup(nmods), tuple(gens), tuple(ngens), s, n_coords)


def is_splitting(D: RelativeDifferenceSet) -> bool:
    """N has a complement in K: every generator g_i of K/N lifts to g_i + t of order dividing d_i."""
    P = present(D.K, D.N)
    for g, d in zip(P.g, P.G.moduli):
        if not any(_scale(D.K, d, D.K.add(g, t)) == D.K.zero() for t in D.N):
            return False
    return True


# the two directions of the correspondence


def planar_to_rds(f: TorusFunction) -> RelativeDifferenceSet:
    """R = {(x; f(x) - S x)} in the carry group built from the fractional parts of f."""
    verdict = check_planarity(f, GENERAL)
    if not verdict.ok:
        raise PreconditionError("function is not fractional planar", verdict.witness)
    G, N = f.domain, f.codomain
    if not f.exact:
        raise PreconditionError("difference sets need exact rational values")
    c = f(G.zero())
    g = {x: N.torus_sub(v, c) for x, v in f.table.items()}
    frac = {x: tuple(v % 1 for v in y) for x, y in g.items()}
    s = []
    for i, d in enumerate(G.moduli):
        e = tuple(int(j == i) for j in range(G.rank))
        col = frac[G.reduce(e)] if d > 1 else (Fraction(0),) * N.rank
        s.append([v * d for v in col])
    S = [[s[i][j] / d for i, d in enumerate(G.moduli)] for j in range(N.rank)]
    ys = {}
    for x, v in g.items():
        Sx = [sum(S[j][i] * x[i] for i in range(G.rank)) for j in range(N.rank)]
        y = [a - b for a, b in zip(v, Sx)]
        if any(Fraction(t).denominator != 1 for t in y):
            raise PreconditionError(f"fractional parts are not linear in x at {x}", x)
        ys[x] = N.reduce([int(t) for t in y])
    s_int = tuple(tuple(int(s[i][j]) for i in range(G.rank)) for j in range(N.rank))
    Kp = CarryGroup(G, N, s_int)
    R = tuple(x + ys[x] for x in G.elements())
    return RelativeDifferenceSet(Kp, tuple(Kp.subgroup_N()), R, (G.order, N.order, G.order, 1))


def rds_to_planar(
    D: RelativeDifferenceSet,
    G_moduli: Sequence[int] | None = None,
    N_moduli: Sequence[int] | None = None,
) -> TorusFunction:
    """f(x) = psi(phi^{-1}(r_x)), r_x the element of R in the coset of x."""
    if not D.semiregular:
        raise PreconditionError("difference set is not semiregular")
    K = D.K
    if isinstance(K, CarryGroup) and N_moduli is None and G_moduli is None and set(D.N) == set(K.subgroup_N()):
        P = Presentation(
            K, K.G, K.N,
            tuple(tuple(int(j == i) for j in range(K.G.rank)) + K.N.zero() for i in range(K.G.rank)),
            tuple(K.G.zero() + tuple(int(j == i) for j in range(K.N.rank)) for i in range(K.N.rank)),
            K.s,
            {K.G.zero() + y: y for y in K.N.elements()},
        )
    else:
        P = present(K, D.N, G_moduli, N_moduli)
    cosets: dict = {}
    for x in P.G.elements():
        base = P.phi(x + P.N.zero())
        for h in D.N:
            cosets[K.add(base, h)] = x
    hits: dict = {}
    for r in D.R:
        hits.setdefault(cosets[r], []).append(r)
    for x in P.G.elements():
        if len(hits.get(x, [])) != 1:
            raise PreconditionError(f"coset of {x} holds {len(hits.get(x, []))} elements of R", x)
    Kp = P.carry_group
    table = {x: Kp.psi(P.phi_inv(hits[x][0], x)) for x in P.G.elements()}
    f = TorusFunction(P.G, P.N, table)
    verdict = check_planarity(f, GENERAL)
    if not verdict.ok:
        raise PreconditionError("recovered function is not fractional planar", verdict.witness)
    return f
