"""Pair graphs of flat matrices: the weighted K(B), the orthogonality graph L(A),
coverage of the complete graph, and exact clique / chromatic numbers.

Vertices are the 2-multisets {i, j} (i <= j) of row indices in
lexicographic order; vertex {i, j} stands for the Schur product of rows i
and j.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import cyclotomic as cy
from .cyclotomic import CyclotomicInt
from .errors import StructuralError, TooLargeError
from .flatmat import DEFAULT_TOL, EXACT, FlatMatrix, check_backend, is_hadamard
from .group import AbelianGroup
from .verdict import Verdict

DEFAULT_CAP = 300


def pair_vertices(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations_with_replacement(range(n), 2))


def _as_flat(A, backend: str) -> FlatMatrix:
    if isinstance(A, FlatMatrix):
        if backend == EXACT and not A.exact:
            raise StructuralError("exact backend needs an exact flat matrix")
        return A if backend == EXACT else FlatMatrix(A.turns(), None, A.normalized)
    arr = np.asarray(A, dtype=np.complex128)
    if backend == EXACT:
        raise StructuralError("exact backend needs a FlatMatrix")
    mod = np.abs(arr)
    if np.max(mod) - np.min(mod) > 1e-9 * max(1.0, float(np.max(mod))):
        raise StructuralError("matrix is not flat")
    return FlatMatrix(np.angle(arr) / (2 * np.pi), None)


def schur_pair_gram(A: FlatMatrix, backend: str = EXACT) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Gram matrix of the Schur products of all row pairs of a flat matrix.

    Entries are unit modulus. Exact mode returns group-ring vectors of shape
    (V, V, nroot); float mode a complex (V, V) array.
    """
    check_backend(backend)
    A = _as_flat(A, backend)
    verts = pair_vertices(A.shape[0])
    i = np.array([v[0] for v in verts], dtype=np.int64)
    j = np.array([v[1] for v in verts], dtype=np.int64)
    if backend == EXACT:
        ph = (A.phases[i] + A.phases[j]) % A.nroot  # (V, cols)
        oh = cy.one_hot(ph.T, A.nroot)  # (cols, V, N)
        return verts, cy.ring_gram(oh, oh)
    t = A.turns()
    vecs = np.exp(2j * np.pi * (t[i] + t[j]))
    return verts, vecs.conj() @ vecs.T


@dataclass
class PairGraph:
    n: int
    vertices: list[tuple[int, int]]
    adjacency: np.ndarray
    weights: dict | None = None
    hadamard: bool | None = None

    def __post_init__(self):
        V = len(self.vertices)
        if self.adjacency.shape != (V, V):
            raise StructuralError("adjacency does not match the vertex count")

    @property
    def order(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        return [(self.vertices[a], self.vertices[b]) for a, b in np.argwhere(np.triu(self.adjacency, 1))]

    def edge_count(self) -> int:
        return int(np.count_nonzero(np.triu(self.adjacency, 1)))

    def adjacent(self, u: tuple[int, int], v: tuple[int, int]) -> bool:
        a = self.vertices.index(tuple(sorted(u)))
        b = self.vertices.index(tuple(sorted(v)))
        return bool(self.adjacency[a, b])

    def to_dot(self, weighted: bool = False) -> str:
        lines = ["graph L {"]
        for u in self.vertices:
            lines.append(f'  "{u[0]},{u[1]}";')
        for a, b in itertools.combinations(range(self.order), 2):
            u, v = self.vertices[a], self.vertices[b]
            if weighted and self.weights is not None:
                w = self.weights[(a, b)]
                lines.append(f'  "{u[0]},{u[1]}" -- "{v[0]},{v[1]}" [label="{_fmt_weight(w)}"];')
            elif self.adjacency[a, b]:
                lines.append(f'  "{u[0]},{u[1]}" -- "{v[0]},{v[1]}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _fmt_weight(w) -> str:
    if isinstance(w, CyclotomicInt):
        v = w.rational_value()
        return str(v) if v is not None else f"{complex(w):.6g}"
    return f"{complex(w):.6g}"


def l_graph(A, backend: str = EXACT, tol: float = DEFAULT_TOL) -> PairGraph:
    """Vertices {i, j}; edge iff the Schur products of the two row pairs are orthogonal."""
    flat = _as_flat(A, backend)
    verts, gram = schur_pair_gram(flat, backend)
    if backend == EXACT:
        adj = cy.ring_is_zero(gram, flat.nroot)
    else:
        adj = np.abs(gram) <= tol * flat.shape[1]
    np.fill_diagonal(adj, False)
    return PairGraph(flat.shape[0], verts, adj)


def k_graph(B, backend: str = EXACT, tol: float = DEFAULT_TOL) -> PairGraph:
    """Weighted pair graph: weight of (u, v), u before v, is <w_u | w_v>."""
    flat = _as_flat(B, backend)
    verts, gram = schur_pair_gram(flat, backend)
    V = len(verts)
    weights = {}
    for a, b in itertools.combinations(range(V), 2):
        weights[(a, b)] = CyclotomicInt.from_array(gram[a, b]) if backend == EXACT else complex(gram[a, b])
    if backend == EXACT:
        adj = cy.ring_is_zero(gram, flat.nroot)
    else:
        adj = np.abs(gram) <= tol * flat.shape[1]
    np.fill_diagonal(adj, False)
    had = is_hadamard(flat, backend, tol) if flat.shape[0] == flat.shape[1] else False
    return PairGraph(flat.shape[0], verts, adj, weights, had)


def weight_sums_vanish(graphs: Sequence[PairGraph], tol: float = DEFAULT_TOL) -> Verdict:
    """Per-edge weight sums over K(B_1), ..., K(B_n) are all zero.

    Edges joining multisets that share an element are exempt for flat inputs;
    for Hadamard inputs they carry weight zero in every graph, which is
    asserted.
    """
    if not graphs:
        raise StructuralError("no graphs given")
    verts = graphs[0].vertices
    if any(g.vertices != verts or g.weights is None for g in graphs):
        raise StructuralError("graphs must be weighted and share a vertex set")
    hadamard = all(g.hadamard for g in graphs)
    for (a, b) in itertools.combinations(range(len(verts)), 2):
        u, v = verts[a], verts[b]
        shared = bool(set(u) & set(v))
        ws = [g.weights[(a, b)] for g in graphs]
        if shared:
            if hadamard:
                assert all(_is_zero(w, tol) for w in ws), f"Hadamard input with non-orthogonal shared edge {u}-{v}"
            continue
        total = ws[0]
        for w in ws[1:]:
            total = total + w
        if not _is_zero(total, tol):
            return Verdict(False, (u, v))
    return Verdict(True, None)


def _is_zero(w, tol: float) -> bool:
    if isinstance(w, CyclotomicInt):
        return w.is_zero()
    return abs(w) <= tol


def covers_complete(LA: PairGraph, LH: PairGraph) -> Verdict:
    """Every pair of distinct vertices is an edge of LA or of LH; witness lists the gaps."""
    if LA.vertices != LH.vertices:
        raise StructuralError("graphs have different vertex sets")
    union = LA.adjacency | LH.adjacency
    np.fill_diagonal(union, True)
    missing = [(LA.vertices[a], LA.vertices[b]) for a, b in np.argwhere(np.triu(~union, 1))]
    return Verdict(not missing, missing or None)


def sum_class_graph(G: AbelianGroup) -> PairGraph:
    """Expected L-graph of the Fourier matrix of G: {a, b} ~ {c, d} iff a + b != c + d."""
    elems = list(G.elements())
    verts = pair_vertices(G.order)
    sums = [G.add(elems[i], elems[j]) for i, j in verts]
    V = len(verts)
    adj = np.array([[sums[a] != sums[b] for b in range(V)] for a in range(V)], dtype=bool).reshape(V, V)
    np.fill_diagonal(adj, False)
    return PairGraph(G.order, verts, adj)


def fourier_edge_count(G: AbelianGroup) -> int:
    """C(V, 2) minus the pairs inside each multiset-sum class."""
    elems = list(G.elements())
    counts: dict = {}
    for i, j in pair_vertices(G.order):
        s = G.add(elems[i], elems[j])
        counts[s] = counts.get(s, 0) + 1
    V = math.comb(G.order + 1, 2)
    return math.comb(V, 2) - sum(math.comb(c, 2) for c in counts.values())


# exact solvers


def _bitsets(G: PairGraph, cap: int) -> list[int]:
    V = G.order
    if V > cap:
        raise TooLargeError(f"graph has {V} vertices; too large for exact solver (cap {cap})")
    return [sum(1 << int(b) for b in np.flatnonzero(G.adjacency[a])) for a in range(V)]


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _color_order(P: int, adj: list[int]) -> tuple[list[int], list[int]]:
    """Greedy colouring of P; vertices listed by non-decreasing colour number."""
    order, bounds = [], []
    uncolored = P
    color = 0
    while uncolored:
        color += 1
        avail = uncolored
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~adj[v] & ~(1 << v)
            uncolored &= ~(1 << v)
            order.append(v)
            bounds.append(color)
    return order, bounds


def max_clique(G: PairGraph, cap: int = DEFAULT_CAP) -> list[int]:
    """A maximum clique (vertex indices), by branch and bound with colouring bounds."""
    adj = _bitsets(G, cap)
    best: list[int] = []

    def expand(R: list[int], P: int) -> None:
        nonlocal best
        order, bounds = _color_order(P, adj)
        for v, c in zip(reversed(order), reversed(bounds)):
            if len(R) + c <= len(best):
                return
            R2 = R + [v]
            P2 = P & adj[v]
            if P2:
                expand(R2, P2)
            elif len(R2) > len(best):
                best = R2
            P &= ~(1 << v)

    if G.order:
        expand([], (1 << G.order) - 1)
    return sorted(best)


def clique_number(G: PairGraph, cap: int = DEFAULT_CAP) -> int:
    return len(max_clique(G, cap))


def _dsatur_greedy(adj: list[int], V: int) -> list[int]:
    colors = [-1] * V
    for _ in range(V):
        v = max(
            (u for u in range(V) if colors[u] < 0),
            key=lambda u: (len({colors[w] for w in _bits(adj[u]) if colors[w] >= 0}), bin(adj[u]).count("1"), -u),
        )
        used = {colors[w] for w in _bits(adj[v])}
        c = 0
        while c in used:
            c += 1
        colors[v] = c
    return colors


def optimal_coloring(G: PairGraph, cap: int = DEFAULT_CAP) -> list[int]:
    """A proper colouring with the minimum number of colours (exact DSATUR search)."""
    V = G.order
    adj = _bitsets(G, cap)
    if V == 0:
        return []
    clique = max_clique(G, cap)
    lower = len(clique)
    best = _dsatur_greedy(adj, V)
    best_k = max(best) + 1
    if best_k == lower:
        return best
    colors = [-1] * V
    for c, v in enumerate(clique):
        colors[v] = c

    def search(k_used: int) -> bool:
        nonlocal best, best_k
        uncolored = [u for u in range(V) if colors[u] < 0]
        if not uncolored:
            best, best_k = list(colors), k_used
            return best_k == lower
        v = max(
            uncolored,
            key=lambda u: (len({colors[w] for w in _bits(adj[u]) if colors[w] >= 0}), bin(adj[u]).count("1"), -u),
        )
        used = {colors[w] for w in _bits(adj[v]) if colors[w] >= 0}
        for c in range(min(k_used + 1, best_k - 1)):
            if c in used:
                continue
            colors[v] = c
            if search(max(k_used, c + 1)):
                return True
            colors[v] = -1
        return False

    search(lower)
    return best


def chromatic_number(G: PairGraph, cap: int = DEFAULT_CAP) -> int:
    colors = optimal_coloring(G, cap)
    chi = max(colors) + 1 if colors else 0
    assert chi >= (clique_number(G, cap) if colors else 0)
    return chi
