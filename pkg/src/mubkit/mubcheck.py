"""Verification of mutually unbiased bases (MUBs) and Hadamards (MUHs).

Angles are compared through squared moduli: two unit vectors of C^n are
unbiased iff n * |<x|y>|^2 == 1, which stays inside cyclotomic arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from . import cyclotomic as cy
from .errors import DomainError, PreconditionError, StructuralError
from .flatmat import (
    DEFAULT_TOL,
    EXACT,
    FlatMatrix,
    Matrix,
    RingMatrix,
    as_complex,
    as_ring,
    check_backend,
    common_ring,
    is_exact,
    is_hadamard,
    matrix_shape,
)
from .verdict import Verdict

RAW = "raw"
MUH_STANDARD = "muh-standard"

Vector = Union[RingMatrix, FlatMatrix, np.ndarray]


@dataclass
class BasisSystem:
    bases: list
    form: str = RAW
    nonflat: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.bases:
            raise StructuralError("a basis system needs at least one basis")
        shapes = {matrix_shape(b) for b in self.bases}
        if len(shapes) != 1:
            raise StructuralError(f"bases of different shapes {sorted(shapes)}")
        rows, cols = shapes.pop()
        if rows != cols:
            raise StructuralError(f"bases must be square, got {rows}x{cols}")
        if self.form not in (RAW, MUH_STANDARD):
            raise StructuralError(f"unknown form {self.form!r}")

    @property
    def n(self) -> int:
        return matrix_shape(self.bases[0])[0]

    def __len__(self) -> int:
        return len(self.bases)

    @property
    def exact(self) -> bool:
        return all(is_exact(b) for b in self.bases)


@dataclass
class MubVerdict:
    n: int
    count: int
    is_mub: bool
    is_complete: bool
    failures: list = field(default_factory=list)
    failure_count: int = 0
    non_orthonormal: list[int] = field(default_factory=list)
    rejected: str | None = None
    margin: float | None = None  # float backend: worst |n*angle^2 - 1|

    def __bool__(self) -> bool:
        return self.is_complete

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return [v.numerator, v.denominator]
            return v

        return {
            "n": self.n,
            "bases": self.count,
            "is_mub": self.is_mub,
            "is_complete": self.is_complete,
            "failure_count": self.failure_count,
            "failures": [
                {"bases": list(f[0]), "columns": list(f[1]), "angle_sq": enc(f[2])} for f in self.failures
            ],
            "non_orthonormal": self.non_orthonormal,
            "rejected": self.rejected,
            "margin": self.margin,
        }


def _column(v: Vector) -> Vector:
    if isinstance(v, (RingMatrix, FlatMatrix)):
        if v.shape[1] != 1:
            raise StructuralError("exact vectors are passed as single-column matrices")
        return v
    arr = np.asarray(v, dtype=np.complex128)
    return arr.reshape(-1)


def column_of(M: Matrix, j: int) -> Vector:
    """Column j of a matrix, in the representation the backends accept."""
    if isinstance(M, FlatMatrix):
        return FlatMatrix(M.phases[:, j : j + 1], M.nroot, M.normalized).to_ring() if M.exact else M.to_complex()[:, j]
    if isinstance(M, RingMatrix):
        return RingMatrix(M.coeffs[:, j : j + 1], M.nroot, M.scale_sq)
    return np.asarray(M)[:, j]


def _ring_value(arr: np.ndarray, nroot: int, scale: Fraction) -> Fraction | float:
    rational, value = cy.ring_rational(arr[None, :], nroot)
    if rational[0]:
        return scale * int(value[0])
    return float(scale) * float(cy.ring_to_complex(np.asarray(arr, dtype=np.float64), nroot).real)


def angle_sq(x: Vector, y: Vector) -> Fraction | float:
    """|<x|y>|^2: exact (Fraction when rational) for ring/flat columns, float otherwise."""
    x, y = _column(x), _column(y)
    if isinstance(x, np.ndarray) or isinstance(y, np.ndarray):
        xa = x if isinstance(x, np.ndarray) else as_complex(x).reshape(-1)
        ya = y if isinstance(y, np.ndarray) else as_complex(y).reshape(-1)
        if xa.shape != ya.shape:
            raise StructuralError("vectors of different dimensions")
        return float(abs(np.vdot(xa, ya)) ** 2)
    a, b = common_ring([x, y])
    if a.shape != b.shape:
        raise StructuralError("vectors of different dimensions")
    g = cy.ring_gram(a.coeffs, b.coeffs)[0, 0]
    return _ring_value(cy.ring_mul(cy.ring_conj(g), g), a.nroot, a.scale_sq * b.scale_sq)


def density_trace(x: Vector, y: Vector) -> Fraction | float:
    """Tr(Y_x^dagger Y_y) for Y_x = |x><x| - I/n, via |<x|y>|^2 - 1/n (unit vectors)."""
    x, y = _column(x), _column(y)
    n = x.shape[0]
    for v in (x, y):
        norm = angle_sq(v, v)
        if isinstance(norm, Fraction) and norm != 1 or isinstance(norm, float) and abs(norm - 1) > 1e-9:
            raise DomainError(f"vector is not a unit vector (norm^2 = {norm})")
    a = angle_sq(x, y)
    if isinstance(a, Fraction):
        return a - Fraction(1, n)
    return a - 1.0 / n


def density_orthogonal(x: Vector, y: Vector, tol: float = DEFAULT_TOL) -> bool:
    t = density_trace(x, y)
    if isinstance(t, Fraction):
        return t == 0
    return abs(t) <= tol


def _orthonormal_exact(B: RingMatrix) -> bool:
    g = cy.ring_gram(B.coeffs, B.coeffs)
    n = B.shape[1]
    s = B.scale_sq
    target = np.zeros_like(g)
    target[np.arange(n), np.arange(n), 0] = s.denominator
    return bool(np.all(cy.ring_is_zero(g * s.numerator - target, B.nroot)))


def _orthonormal_float(B: np.ndarray, tol: float) -> bool:
    g = B.conj().T @ B
    return bool(np.max(np.abs(g - np.eye(B.shape[1])), initial=0.0) <= tol)


def is_mub_system(
    S: BasisSystem | Sequence[Matrix],
    backend: str = EXACT,
    tol: float = DEFAULT_TOL,
    require_orthonormal: bool = True,
    max_failures: int = 100,
) -> MubVerdict:
    """Check every inter-basis column pair for n * |<x|y>|^2 == 1.

    Systems with more than n + 1 bases (n >= 2) are rejected before any pair
    is examined. A non-orthonormal basis raises ``PreconditionError`` unless
    ``require_orthonormal`` is false, in which case it is recorded and the
    verdict is negative.
    """
    check_backend(backend)
    if not isinstance(S, BasisSystem):
        S = BasisSystem(list(S))
    n, r = S.n, len(S)
    verdict = MubVerdict(n, r, False, False)
    if n >= 2 and r > n + 1:
        verdict.rejected = f"{r} bases exceed the maximum n + 1 = {n + 1}"
        return verdict

    if backend == EXACT:
        mats = common_ring(S.bases)
        verdict.non_orthonormal = [i for i, B in enumerate(mats) if not _orthonormal_exact(B)]
    else:
        mats = [as_complex(b) for b in S.bases]
        verdict.non_orthonormal = [i for i, B in enumerate(mats) if not _orthonormal_float(B, tol)]
    if verdict.non_orthonormal and require_orthonormal:
        raise PreconditionError(f"bases {verdict.non_orthonormal} are not orthonormal", verdict.non_orthonormal)

    worst = 0.0
    for i in range(r):
        for j in range(i + 1, r):
            if backend == EXACT:
                A, B = mats[i], mats[j]
                g = cy.ring_gram(A.coeffs, B.coeffs)
                mod = cy.ring_mul(cy.ring_conj(g), g)
                c = n * A.scale_sq * B.scale_sq
                test = mod * c.numerator
                test[..., 0] -= c.denominator
                bad = np.argwhere(~cy.ring_is_zero(test, A.nroot))
                for a, b in bad:
                    if len(verdict.failures) < max_failures:
                        val = _ring_value(mod[a, b], A.nroot, A.scale_sq * B.scale_sq)
                        verdict.failures.append(((i, j), (int(a), int(b)), val))
                verdict.failure_count += len(bad)
            else:
                g = mats[i].conj().T @ mats[j]
                dev = np.abs(n * np.abs(g) ** 2 - 1)
                worst = max(worst, float(np.max(dev, initial=0.0)))
                bad = np.argwhere(dev > tol)
                for a, b in bad:
                    if len(verdict.failures) < max_failures:
                        verdict.failures.append(((i, j), (int(a), int(b)), float(abs(g[a, b]) ** 2)))
                verdict.failure_count += len(bad)
    if backend != EXACT:
        verdict.margin = worst
    verdict.is_mub = verdict.failure_count == 0 and not verdict.non_orthonormal
    verdict.is_complete = verdict.is_mub and r == n + 1
    return verdict


def normalize_to_muh(S: BasisSystem | Sequence[Matrix], backend: str = EXACT, tol: float = DEFAULT_TOL) -> BasisSystem:
    """Rewrite every basis in coordinates of the first one (B_0^dagger B_i).

    Bases other than the first whose entries are not all of squared modulus
    1/n are listed in ``nonflat`` of the result.
    """
    check_backend(backend)
    if not isinstance(S, BasisSystem):
        S = BasisSystem(list(S))
    n = S.n
    out, nonflat = [], []
    if backend == EXACT:
        mats = [as_ring(b) for b in S.bases]
        B0 = mats[0]
        for idx, B in enumerate(mats):
            C = B0.adjoint_mul(B)
            if idx > 0:
                mod = cy.ring_mul(cy.ring_conj(C.coeffs), C.coeffs)
                c = n * C.scale_sq
                test = mod * c.numerator
                test[..., 0] -= c.denominator
                if not np.all(cy.ring_is_zero(test, C.nroot)):
                    nonflat.append(idx)
            flat = C.to_flat()
            if idx == 0 and C.is_identity():
                out.append(RingMatrix.identity(n))
            else:
                out.append(flat if flat is not None else C)
    else:
        mats = [as_complex(b) for b in S.bases]
        B0 = mats[0]
        for idx, B in enumerate(mats):
            C = B0.conj().T @ B
            if idx > 0 and np.max(np.abs(n * np.abs(C) ** 2 - 1)) > tol:
                nonflat.append(idx)
            out.append(C)
    return BasisSystem(out, MUH_STANDARD, nonflat)


def _flat_phases(H: Matrix, backend: str) -> FlatMatrix | np.ndarray:
    if isinstance(H, FlatMatrix):
        return H
    if isinstance(H, RingMatrix):
        flat = H.to_flat()
        if flat is None:
            raise DomainError("matrix is not flat")
        return flat
    arr = np.asarray(H, dtype=np.complex128)
    mod = np.abs(arr)
    if np.max(mod) - np.min(mod) > 1e-9 * max(1.0, float(np.max(mod))):
        raise DomainError("matrix is not flat")
    return arr


def concatenate_flat(mats: Sequence[FlatMatrix]) -> FlatMatrix:
    """Side-by-side concatenation [H_1 H_2 ... ] of flat matrices (unnormalized)."""
    if all(m.exact for m in mats):
        N = math.lcm(1, *(m.nroot for m in mats))
        return FlatMatrix(np.concatenate([m.lift(N).phases for m in mats], axis=1), N, False)
    return FlatMatrix(np.concatenate([m.turns() for m in mats], axis=1), None, False)


def glavnaja_check(Hs: Sequence[Matrix], backend: str = EXACT, tol: float = DEFAULT_TOL) -> Verdict:
    """Complete-MUH test through orthogonality of row-pair Schur products.

    The n Hadamards are concatenated into an n x n^2 matrix with rows w_i;
    {I, H_1, ..., H_n} is a complete MUB system iff every H_r is Hadamard and
    the vectors w_i o w_j (i <= j) are pairwise orthogonal.
    """
    from .lgraph import schur_pair_gram

    check_backend(backend)
    n = len(Hs)
    if n == 0:
        raise StructuralError("need at least one matrix")
    for H in Hs:
        if matrix_shape(H) != (n, n):
            raise StructuralError(f"expected {n} matrices of size {n}x{n}, got {matrix_shape(H)}")
    flats = [_flat_phases(H, backend) for H in Hs]
    if backend == EXACT:
        if not all(isinstance(f, FlatMatrix) and f.exact for f in flats):
            raise StructuralError("exact backend needs exact flat matrices")
    else:
        flats = [
            FlatMatrix(np.angle(f) / (2 * np.pi), None) if isinstance(f, np.ndarray) else FlatMatrix(f.turns(), None)
            for f in flats
        ]
    for idx, f in enumerate(flats):
        if not is_hadamard(f, backend, tol):
            return Verdict(False, {"kind": "not_hadamard", "matrix": idx})
    vertices, gram = schur_pair_gram(concatenate_flat(flats), backend)
    if backend == EXACT:
        off = ~cy.ring_is_zero(gram, concatenate_flat(flats).nroot)
    else:
        off = np.abs(gram) > tol * n * n
    np.fill_diagonal(off, False)
    bad = np.argwhere(np.triu(off, 1))
    if len(bad):
        a, b = bad[0]
        return Verdict(False, {"kind": "orthogonality", "pairs": [list(vertices[a]), list(vertices[b])]})
    return Verdict(True, None)


def union_system(S: BasisSystem | Sequence[Matrix]):
    """All basis vectors of S as one vector sequence."""
    from .flatmat import VectorSystem

    bases = S.bases if isinstance(S, BasisSystem) else list(S)
    return VectorSystem(list(bases))
