"""Flat (unit-modulus) matrices, Schur algebra on phase rows, and backends.

Two matrix representations are exact:

* :class:`FlatMatrix` stores entry ``exp(2*pi*i*a/nroot)`` as the integer ``a``
  (or, in float mode, a float number of turns with ``nroot=None``).
* :class:`RingMatrix` stores arbitrary entries of Z[zeta_N] as group-ring
  vectors together with a rational squared scale, so that the matrix equals
  ``coeffs * sqrt(scale_sq)``. Identity matrices and products like B0^dagger B
  live here.

Plain complex ``numpy`` arrays serve as the float backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from . import cyclotomic as cy
from .cyclotomic import CyclotomicInt
from .errors import StructuralError
from .group import Phase, reduce_phase

EXACT = "exact"
FLOAT = "float"
DEFAULT_TOL = 1e-9


def check_backend(backend: str) -> str:
    if backend not in (EXACT, FLOAT):
        raise StructuralError(f"unknown backend {backend!r} (use 'exact' or 'float')")
    return backend


# phase rows


def _is_exact_row(u: Sequence[Phase]) -> bool:
    return not any(isinstance(x, float) for x in u)


def _same_length(u, v) -> None:
    if len(u) != len(v):
        raise StructuralError(f"rows have lengths {len(u)} and {len(v)}")


def schur(u: Sequence[Phase], v: Sequence[Phase]) -> tuple[Phase, ...]:
    """Entrywise product of two unit-modulus rows, as phases."""
    _same_length(u, v)
    return tuple(reduce_phase(a + b) for a, b in zip(u, v))


def schur_power(u: Sequence[Phase], k: int) -> tuple[Phase, ...]:
    return tuple(reduce_phase(k * a) for a in u)


def inner(u: Sequence[Phase], v: Sequence[Phase]) -> CyclotomicInt | complex:
    """<u|v> = sum conj(u_i) v_i for unit-modulus rows given by phases."""
    _same_length(u, v)
    if _is_exact_row(u) and _is_exact_row(v):
        return CyclotomicInt.from_phases([Fraction(b) - Fraction(a) for a, b in zip(u, v)])
    return complex(np.sum(np.exp(2j * np.pi * (np.asarray(v, float) - np.asarray(u, float)))))


# matrices


@dataclass(frozen=True, eq=False)
class FlatMatrix:
    phases: np.ndarray
    nroot: int | None = None
    normalized: bool = False

    def __post_init__(self):
        ph = np.asarray(self.phases)
        if ph.ndim != 2:
            raise StructuralError("phase array must be two-dimensional")
        if self.nroot is None:
            ph = np.mod(ph.astype(np.float64), 1.0)
        else:
            if self.nroot < 1:
                raise StructuralError("nroot must be positive")
            if ph.dtype.kind not in "iu":
                if not np.all(np.equal(np.mod(ph, 1), 0)):
                    raise StructuralError("exact phases must be integers modulo nroot")
            ph = np.mod(ph.astype(np.int64), self.nroot)
        ph.setflags(write=False)
        object.__setattr__(self, "phases", ph)

    @classmethod
    def from_fractions(cls, rows: Sequence[Sequence[Phase]], normalized: bool = False) -> FlatMatrix:
        """Build from phases in turns; any float switches to float mode."""
        if any(isinstance(x, float) for r in rows for x in r):
            return cls(np.array(rows, dtype=np.float64), None, normalized)
        fr = [[Fraction(x) for x in r] for r in rows]
        n = math.lcm(1, *(x.denominator for r in fr for x in r))
        return cls(np.array([[int(x * n) for x in r] for r in fr], dtype=np.int64).reshape(len(fr), -1), n, normalized)

    @property
    def exact(self) -> bool:
        return self.nroot is not None

    @property
    def shape(self) -> tuple[int, int]:
        return self.phases.shape

    def turns(self) -> np.ndarray:
        """Phases as floats in [0, 1)."""
        if self.exact:
            return self.phases / self.nroot
        return self.phases

    def entry(self, i: int, j: int) -> Phase:
        if self.exact:
            return Fraction(int(self.phases[i, j]), self.nroot)
        return float(self.phases[i, j])

    def row(self, i: int) -> tuple[Phase, ...]:
        return tuple(self.entry(i, j) for j in range(self.shape[1]))

    def rows(self) -> list[tuple[Phase, ...]]:
        return [self.row(i) for i in range(self.shape[0])]

    def column(self, j: int) -> tuple[Phase, ...]:
        return tuple(self.entry(i, j) for i in range(self.shape[0]))

    def scale_sq(self) -> Fraction:
        return Fraction(1, self.shape[0]) if self.normalized else Fraction(1)

    def to_complex(self) -> np.ndarray:
        m = np.exp(2j * np.pi * self.turns())
        if self.normalized:
            m = m / math.sqrt(self.shape[0])
        return m

    def to_ring(self) -> RingMatrix:
        if not self.exact:
            raise StructuralError("float-mode flat matrix has no exact representation")
        return RingMatrix(cy.one_hot(self.phases, self.nroot), self.nroot, self.scale_sq())

    def lift(self, nroot: int) -> FlatMatrix:
        if not self.exact or nroot % self.nroot:
            raise StructuralError(f"cannot lift order {self.nroot} to {nroot}")
        return FlatMatrix(self.phases * (nroot // self.nroot), nroot, self.normalized)

    def with_normalized(self, normalized: bool) -> FlatMatrix:
        return FlatMatrix(self.phases, self.nroot, normalized)

    def transpose(self) -> FlatMatrix:
        return FlatMatrix(self.phases.T, self.nroot, self.normalized)

    def perturbed(self, i: int, j: int, delta: Phase) -> FlatMatrix:
        """Copy with entry (i, j) rotated by ``delta`` turns."""
        if self.exact and not isinstance(delta, float):
            delta = Fraction(delta)
            n = math.lcm(self.nroot, delta.denominator)
            ph = self.lift(n).phases.copy()
            ph[i, j] += int(delta * n)
            return FlatMatrix(ph, n, self.normalized)
        ph = self.turns().copy()
        ph[i, j] += float(delta)
        return FlatMatrix(ph, None, self.normalized)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FlatMatrix) or self.shape != other.shape:
            return False
        if self.normalized != other.normalized:
            return False
        if self.exact and other.exact:
            n = math.lcm(self.nroot, other.nroot)
            return bool(np.array_equal(self.lift(n).phases, other.lift(n).phases))
        return bool(np.allclose(np.exp(2j * np.pi * self.turns()), np.exp(2j * np.pi * other.turns())))

    __hash__ = None

    def __repr__(self) -> str:
        return f"FlatMatrix(shape={self.shape}, nroot={self.nroot}, normalized={self.normalized})"


@dataclass(frozen=True, eq=False)
class RingMatrix:
    coeffs: np.ndarray
    nroot: int
    scale_sq: Fraction = Fraction(1)

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.ndim != 3 or c.shape[-1] != self.nroot:
            raise StructuralError(f"coefficient array must have shape (rows, cols, {self.nroot})")
        object.__setattr__(self, "scale_sq", Fraction(self.scale_sq))

    @classmethod
    def identity(cls, n: int, nroot: int = 1) -> RingMatrix:
        c = np.zeros((n, n, nroot), dtype=np.int64)
        c[np.arange(n), np.arange(n), 0] = 1
        return cls(c, nroot, Fraction(1))

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[:2]

    def lift(self, nroot: int) -> RingMatrix:
        return RingMatrix(cy.ring_lift(self.coeffs, self.nroot, nroot), nroot, self.scale_sq)

    def to_complex(self) -> np.ndarray:
        return cy.ring_to_complex(self.coeffs, self.nroot) * math.sqrt(self.scale_sq)

    def adjoint_mul(self, other: RingMatrix) -> RingMatrix:
        """self^dagger @ other."""
        n = math.lcm(self.nroot, other.nroot)
        a, b = self.lift(n), other.lift(n)
        return RingMatrix(cy.ring_gram(a.coeffs, b.coeffs), n, a.scale_sq * b.scale_sq)

    def is_identity(self) -> bool:
        if self.shape[0] != self.shape[1]:
            return False
        n = self.shape[0]
        zero = cy.ring_is_zero(self.coeffs, self.nroot)
        if not np.all(zero | np.eye(n, dtype=bool)):
            return False
        rational, value = cy.ring_rational(self.coeffs[np.arange(n), np.arange(n)], self.nroot)
        return bool(np.all(rational)) and all(v > 0 and v * v * self.scale_sq == 1 for v in value.tolist())

    def to_flat(self) -> FlatMatrix | None:
        """The same matrix as a FlatMatrix when every entry is a single root of unity."""
        c = self.coeffs
        rows, cols = self.shape
        if not (np.all(np.sum(c != 0, axis=-1) == 1) and np.all(np.sum(c, axis=-1) == 1)):
            return None
        if self.scale_sq == 1:
            normalized = False
        elif self.scale_sq == Fraction(1, rows):
            normalized = True
        else:
            return None
        return FlatMatrix(np.argmax(c, axis=-1), self.nroot, normalized)

    def __repr__(self) -> str:
        return f"RingMatrix(shape={self.shape}, nroot={self.nroot}, scale_sq={self.scale_sq})"


Matrix = Union[FlatMatrix, RingMatrix, np.ndarray]


def is_exact(m: Matrix) -> bool:
    return isinstance(m, RingMatrix) or (isinstance(m, FlatMatrix) and m.exact)


def as_ring(m: Matrix) -> RingMatrix:
    if isinstance(m, RingMatrix):
        return m
    if isinstance(m, FlatMatrix):
        return m.to_ring()
    raise StructuralError("exact backend needs FlatMatrix or RingMatrix input, got a float matrix")


def as_complex(m: Matrix) -> np.ndarray:
    if isinstance(m, (FlatMatrix, RingMatrix)):
        return m.to_complex()
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise StructuralError("matrix must be two-dimensional")
    return arr


def matrix_shape(m: Matrix) -> tuple[int, int]:
    if isinstance(m, (FlatMatrix, RingMatrix)):
        return m.shape
    return np.shape(m)


def common_ring(mats: Sequence[Matrix]) -> list[RingMatrix]:
    rings = [as_ring(m) for m in mats]
    n = math.lcm(1, *(r.nroot for r in rings))
    return [r.lift(n) for r in rings]


def is_hadamard(B: FlatMatrix | np.ndarray, backend: str = EXACT, tol: float = DEFAULT_TOL) -> bool:
    """Flat and with pairwise orthogonal rows (entries taken up to common scaling)."""
    check_backend(backend)
    rows, cols = matrix_shape(B)
    if rows != cols:
        raise StructuralError(f"Hadamard test needs a square matrix, got {rows}x{cols}")
    if backend == EXACT:
        if not isinstance(B, FlatMatrix):
            raise StructuralError("exact Hadamard test needs a FlatMatrix")
        ring = B.to_ring()
        # rows as vectors: sum over the column axis
        g = cy.ring_gram(ring.coeffs.transpose(1, 0, 2), ring.coeffs.transpose(1, 0, 2))
        zero = cy.ring_is_zero(g, ring.nroot)
        return bool(np.all(zero | np.eye(rows, dtype=bool)))
    m = as_complex(B)
    mod = np.abs(m)
    if np.max(mod) - np.min(mod) > tol * max(1.0, float(np.max(mod))):
        return False
    g = m @ m.conj().T
    scale = float(np.real(g[0, 0])) if rows else 1.0
    off = g - np.diag(np.diag(g))
    return bool(np.max(np.abs(off), initial=0.0) <= tol * max(scale, 1.0))


@dataclass
class VectorSystem:
    """A finite sequence of vectors: the columns of ``blocks``, optionally weighted.

    A weight w multiplies its vector, so a unit vector contributes <x|x> = w^2.
    """

    blocks: list
    weights: list | None = None
    dim: int = field(init=False)
    count: int = field(init=False)

    def __post_init__(self):
        if not self.blocks:
            raise StructuralError("empty vector system")
        dims = {matrix_shape(b)[0] for b in self.blocks}
        if len(dims) != 1:
            raise StructuralError(f"vectors of different dimensions {sorted(dims)}")
        self.dim = dims.pop()
        self.count = sum(matrix_shape(b)[1] for b in self.blocks)
        if self.count == 0:
            raise StructuralError("empty vector system")
        if self.weights is not None and len(self.weights) != self.count:
            raise StructuralError(f"{len(self.weights)} weights for {self.count} vectors")

    @classmethod
    def from_bases(cls, bases: Sequence[Matrix], basis_weights: Sequence | None = None) -> VectorSystem:
        weights = None
        if basis_weights is not None:
            weights = [w for b, w in zip(bases, basis_weights) for _ in range(matrix_shape(b)[1])]
        return cls(list(bases), weights)

    def exact_columns(self) -> tuple[np.ndarray, list[Fraction]]:
        """Group-ring columns (dim, count, N) and each column's squared scale."""
        rings = common_ring(self.blocks)
        coeffs = np.concatenate([r.coeffs for r in rings], axis=1)
        scales = [r.scale_sq for r in rings for _ in range(r.shape[1])]
        if self.weights is not None:
            ws = []
            for w in self.weights:
                if isinstance(w, float) and not w.is_integer():
                    raise StructuralError("exact backend needs rational weights")
                ws.append(Fraction(w))
            scales = [s * w * w for s, w in zip(scales, ws)]
        return coeffs, scales

    def complex_columns(self) -> np.ndarray:
        cols = np.concatenate([as_complex(b) for b in self.blocks], axis=1)
        if self.weights is not None:
            cols = cols * np.asarray([float(w) for w in self.weights])[None, :]
        return cols


# JSON interchange


def matrix_from_json(obj) -> Matrix:
    """Parse one matrix object.

    Accepted forms: ``{"nroot", "phases", "normalized"}`` (``null`` phases are
    zero entries), ``{"identity": n}``, ``{"nroot", "coeffs", "scale_sq"}`` and
    float ``{"re", "im"}``.
    """
    if not isinstance(obj, dict):
        raise StructuralError("matrix object must be a JSON object")
    try:
        if "identity" in obj:
            return RingMatrix.identity(int(obj["identity"]))
        if "re" in obj:
            re = np.asarray(obj["re"], dtype=np.float64)
            im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=np.float64)
            if re.shape != im.shape or re.ndim != 2:
                raise StructuralError("re/im must be equal-shape 2-D arrays")
            return re + 1j * im
        if "coeffs" in obj:
            n = int(obj["nroot"])
            num, den = obj.get("scale_sq", [1, 1])
            return RingMatrix(np.asarray(obj["coeffs"], dtype=np.int64), n, Fraction(int(num), int(den)))
        phases = obj["phases"]
        normalized = bool(obj.get("normalized", False))
        nroot = obj.get("nroot")
        if not isinstance(phases, list) or not all(isinstance(r, list) for r in phases):
            raise StructuralError("phases must be a list of rows")
        if len({len(r) for r in phases}) > 1:
            raise StructuralError("ragged phase rows")
        has_zero = any(x is None for r in phases for x in r)
        if nroot is None:
            if has_zero:
                raise StructuralError("zero entries need an exact nroot")
            return FlatMatrix(np.asarray(phases, dtype=np.float64), None, normalized)
        nroot = int(nroot)
        if not has_zero:
            return FlatMatrix(np.asarray(phases, dtype=np.int64).reshape(len(phases), -1), nroot, normalized)
        rows, cols = len(phases), len(phases[0])
        c = np.zeros((rows, cols, nroot), dtype=np.int64)
        for i, r in enumerate(phases):
            for j, x in enumerate(r):
                if x is not None:
                    c[i, j, int(x) % nroot] = 1
        return RingMatrix(c, nroot, Fraction(1, rows) if normalized else Fraction(1))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, StructuralError):
            raise
        raise StructuralError(f"malformed matrix object: {exc}") from exc


def matrix_to_json(m: Matrix) -> dict:
    if isinstance(m, FlatMatrix):
        if m.exact:
            return {"nroot": m.nroot, "phases": m.phases.tolist(), "normalized": m.normalized}
        return {"nroot": None, "phases": m.phases.tolist(), "normalized": m.normalized}
    if isinstance(m, RingMatrix):
        if m.is_identity():
            return {"identity": m.shape[0]}
        flat = m.to_flat()
        if flat is not None:
            return matrix_to_json(flat)
        return {
            "nroot": m.nroot,
            "coeffs": np.asarray(m.coeffs).tolist(),
            "scale_sq": [m.scale_sq.numerator, m.scale_sq.denominator],
        }
    arr = np.asarray(m, dtype=np.complex128)
    return {"re": arr.real.tolist(), "im": arr.imag.tolist()}
