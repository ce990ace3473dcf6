"""Welch bounds and the Schur-product (W-set) criterion for attaining them.

For vectors x_1..x_m in C^n and k >= 1::

    C(n+k-1, k) * sum_{i,j} |<x_i|x_j>|^(2k)  >=  (sum_i <x_i|x_i>^k)^2

Equality holds iff the Schur products of all k-multisets of rows of the
matrix [x_1 ... x_m], each weighted by its multinomial coefficient, have
equal squared length and are pairwise orthogonal. Square roots of the
multinomials are never formed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from . import cyclotomic as cy
from .errors import DomainError
from .flatmat import DEFAULT_TOL, EXACT, Matrix, VectorSystem, check_backend
from .verdict import Verdict

Number = Union[Fraction, float]


@dataclass(frozen=True)
class WelchReport:
    k: int
    n: int
    lhs: Number
    rhs: Number
    margin: Number
    attained: bool
    exact: bool

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return str(v) if v.denominator != 1 else v.numerator
            return v

        return {
            "k": self.k,
            "n": self.n,
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
            "margin": enc(self.margin),
            "attained": self.attained,
            "backend": "exact" if self.exact else "float",
        }


@dataclass(frozen=True)
class WSet:
    """Schur products of the k-multisets of rows of a matrix.

    ``vectors[e]`` is the product for ``multisets[e]``; in exact mode it is a
    group-ring array of shape (m, N) and ``column_weights`` holds the integer
    factor each column contributes to inner products (the squared column
    scale to the k-th power, cleared of denominators by ``denominator``).
    """

    k: int
    multisets: list[tuple[int, ...]]
    multinomials: list[int]
    vectors: np.ndarray
    nroot: int | None
    column_weights: np.ndarray | None = None
    denominator: int = 1

    def __len__(self) -> int:
        return len(self.multisets)


def multinomial(ms: Sequence[int]) -> int:
    """k! / prod(k_i!) for the multiplicities of a multiset given as a sorted tuple."""
    out = math.factorial(len(ms))
    for _, grp in itertools.groupby(ms):
        out //= math.factorial(len(list(grp)))
    return out


def _as_system(X: VectorSystem | Matrix) -> VectorSystem:
    return X if isinstance(X, VectorSystem) else VectorSystem([X])


def _integer_weights(scales: Sequence[Fraction], k: int) -> tuple[np.ndarray, int]:
    powered = [s**k for s in scales]
    den = math.lcm(1, *(p.denominator for p in powered))
    ints = [int(p * den) for p in powered]
    dtype = object if max(ints, default=0) >= 2**62 else np.int64
    return np.array(ints, dtype=dtype), den


def _weighted_total(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """sum_{i,j} w_i w_j x[i, j, :]."""
    wmax = max((abs(int(v)) for v in w), default=0)
    bound = wmax * wmax * cy._max_abs(x) * x.shape[0] * x.shape[1]
    if bound >= 2**62 or x.dtype == object:
        x = x.astype(object)
        w = w.astype(object)
    y = np.tensordot(w, x, axes=(0, 0))
    return np.tensordot(w, y, axes=(0, 0))


def _exact_value(arr: np.ndarray, nroot: int, den: int) -> Number:
    rational, value = cy.ring_rational(arr[None, :], nroot)
    if rational[0]:
        return Fraction(int(value[0]), den)
    return float(cy.ring_to_complex(arr.astype(np.float64), nroot).real) / den


def welch_report(X: VectorSystem | Matrix, k: int, backend: str = EXACT, tol: float = DEFAULT_TOL) -> WelchReport:
    check_backend(backend)
    if k < 1:
        raise DomainError("k must be >= 1")
    X = _as_system(X)
    n = X.dim
    binom = math.comb(n + k - 1, k)
    if backend == EXACT:
        coeffs, scales = X.exact_columns()
        nroot = coeffs.shape[-1]
        gram = cy.ring_gram(coeffs, coeffs)
        mod_sq = cy.ring_mul(cy.ring_conj(gram), gram)
        powered = cy.ring_pow(mod_sq, k)
        w, den = _integer_weights(scales, k)
        lhs_num = _weighted_total(powered, w) * binom  # over den^2
        diag = gram[np.arange(X.count), np.arange(X.count)]
        trace = np.tensordot(w.astype(object), cy.ring_pow(diag, k).astype(object), axes=(0, 0))
        rhs_num = cy.ring_mul(trace[None, :], trace[None, :])[0]  # over den^2
        margin_num = np.asarray(lhs_num, dtype=object) - np.asarray(rhs_num, dtype=object)
        attained = bool(cy.ring_is_zero(margin_num[None, :], nroot)[0])
        d2 = den * den
        return WelchReport(
            k,
            n,
            _exact_value(np.asarray(lhs_num, dtype=object), nroot, d2),
            _exact_value(np.asarray(rhs_num, dtype=object), nroot, d2),
            Fraction(0) if attained else _exact_value(margin_num, nroot, d2),
            attained,
            True,
        )
    cols = X.complex_columns()
    gram = cols.conj().T @ cols
    lhs = binom * float(np.sum(np.abs(gram) ** (2 * k)))
    rhs = float(np.real(np.sum(np.diag(gram) ** k))) ** 2
    margin = lhs - rhs
    return WelchReport(k, n, lhs, rhs, margin, abs(margin) <= tol * max(1.0, abs(rhs)), False)


def build_wset(X: VectorSystem | Matrix, k: int, backend: str = EXACT) -> WSet:
    check_backend(backend)
    if k < 1:
        raise DomainError("k must be >= 1")
    X = _as_system(X)
    multisets = list(itertools.combinations_with_replacement(range(X.dim), k))
    mults = [multinomial(ms) for ms in multisets]
    if backend == EXACT:
        coeffs, scales = X.exact_columns()
        nroot = coeffs.shape[-1]
        vecs = []
        for ms in multisets:
            v = coeffs[ms[0]]
            for i in ms[1:]:
                v = cy.ring_mul(v, coeffs[i])
            vecs.append(v)
        w, den = _integer_weights(scales, k)
        return WSet(k, multisets, mults, np.stack(vecs), nroot, w, den)
    cols = X.complex_columns()
    vecs = np.stack([np.prod(cols[list(ms)], axis=0) for ms in multisets])
    return WSet(k, multisets, mults, vecs, None)


def wset_gram(W: WSet) -> np.ndarray:
    """Inner products between W-set entries (unscaled by multinomials)."""
    if W.nroot is None:
        return W.vectors.conj() @ W.vectors.T
    v = W.vectors.transpose(1, 0, 2)
    return cy.ring_gram(v, v, W.column_weights)


def attains_welch(X: VectorSystem | Matrix, k: int, backend: str = EXACT, tol: float = DEFAULT_TOL) -> Verdict:
    """Welch equality via the W-set: equal scaled lengths and pairwise orthogonality.

    The witness names the lexicographically first offending pair of
    multisets: an orthogonality failure if there is one, else a length
    mismatch against the first multiset.
    """
    W = build_wset(X, k, backend)
    gram = wset_gram(W)
    E = len(W)
    mults = W.multinomials
    if W.nroot is None:
        lengths = np.real(np.diag(gram)) * np.asarray(mults, dtype=float)
        scale = max(1.0, float(np.max(np.abs(lengths))))
        off = np.abs(gram) > tol * scale
        np.fill_diagonal(off, False)
        bad_len = np.abs(lengths - lengths[0]) > tol * scale
    else:
        zero = cy.ring_is_zero(gram, W.nroot)
        off = ~zero
        np.fill_diagonal(off, False)
        diag = gram[np.arange(E), np.arange(E)]
        scaled = diag.astype(object) * np.asarray(mults, dtype=object)[:, None]
        bad_len = ~cy.ring_is_zero(scaled - scaled[0][None, :], W.nroot)
    iu = np.argwhere(np.triu(off, 1))
    if len(iu):
        a, b = iu[0]
        return Verdict(False, {"kind": "orthogonality", "multisets": [list(W.multisets[a]), list(W.multisets[b])]})
    bad = np.flatnonzero(bad_len)
    if len(bad):
        return Verdict(False, {"kind": "length", "multisets": [list(W.multisets[0]), list(W.multisets[bad[0]])]})
    return Verdict(True, None)


def is_t_design(X: VectorSystem | Matrix, t: int, backend: str = EXACT, tol: float = DEFAULT_TOL) -> bool:
    """Complex projective t-design: Welch equality for every k <= t."""
    return all(attains_welch(X, k, backend, tol).ok for k in range(1, t + 1))


def hypothetical_mub_sides(n: int, r: int) -> tuple[Fraction, Fraction]:
    """Both k=2 Welch sides for r mutually unbiased bases of unit vectors in C^n.

    Each of the r*n vectors has inner product 1 with itself and squared
    angle 1/n with the (r-1)*n vectors of other bases.
    """
    per_vector = 1 + Fraction((r - 1) * n, n * n)
    lhs = math.comb(n + 1, 2) * r * n * per_vector
    rhs = Fraction(r * n) ** 2
    return lhs, rhs


def max_mub_bound(n: int) -> float | int:
    """Largest r for which r mutually unbiased bases of C^n are Welch-consistent."""
    if n < 1:
        raise DomainError("dimension must be positive")
    if n == 1:
        return math.inf
    r = 1
    while True:
        lhs, rhs = hypothetical_mub_sides(n, r + 1)
        if lhs < rhs:
            return r
        r += 1
