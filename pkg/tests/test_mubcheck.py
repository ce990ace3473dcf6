from fractions import Fraction

import numpy as np
import pytest

from mubkit.constructions import fourier_matrix, prime_power_mub
from mubkit.errors import DomainError, PreconditionError, StructuralError
from mubkit.flatmat import FlatMatrix, RingMatrix, as_complex
from mubkit.group import AbelianGroup
from mubkit.mubcheck import (
    MUH_STANDARD,
    BasisSystem,
    angle_sq,
    column_of,
    density_orthogonal,
    density_trace,
    glavnaja_check,
    is_mub_system,
    normalize_to_muh,
)

from _systems import randomized_systems, to_float_system


def fourier(n, normalized=True):
    return fourier_matrix(AbelianGroup((n,))).with_normalized(normalized)


def n2_system():
    F2 = fourier(2)
    D = FlatMatrix(np.array([[0, 0], [1, 3]]), 4, True)  # diag(1, i) F_2 in quarter turns
    return [RingMatrix.identity(2), F2, D]


def test_angle_examples():
    I3 = RingMatrix.identity(3)
    e0, e1 = column_of(I3, 0), column_of(I3, 1)
    assert angle_sq(e0, e0) == 1
    assert angle_sq(e0, e1) == 0
    for n in range(2, 8):
        assert angle_sq(column_of(RingMatrix.identity(n), 0), column_of(fourier(n), 1)) == Fraction(1, n)
    with pytest.raises(StructuralError):
        angle_sq(e0, column_of(RingMatrix.identity(2), 0))


def test_density_examples():
    I2 = RingMatrix.identity(2)
    e0, e1 = column_of(I2, 0), column_of(I2, 1)
    assert not density_orthogonal(e0, e0)
    assert density_trace(e0, e0) == Fraction(1, 2)
    assert density_orthogonal(e0, column_of(fourier(2), 0))
    assert density_trace(e0, e1) == Fraction(-1, 2)
    assert not density_orthogonal(e0, e1)
    with pytest.raises(DomainError):
        density_trace(column_of(fourier(2, normalized=False), 0), e0)


def test_density_matches_angle_float():
    rng = np.random.default_rng(11)
    for n in range(2, 7):
        for _ in range(200):
            x = rng.normal(size=n) + 1j * rng.normal(size=n)
            x /= np.linalg.norm(x)
            y = rng.normal(size=n) + 1j * rng.normal(size=n)
            y /= np.linalg.norm(y)
            assert density_orthogonal(x, y) == (abs(n * angle_sq(x, y) - 1) <= 1e-9)


def test_n2_complete():
    v = is_mub_system(n2_system())
    assert v.is_mub and v.is_complete and v.count == 3
    assert glavnaja_check(n2_system()[1:]).ok


def test_identical_bases_fail():
    I = RingMatrix.identity(3)
    v = is_mub_system([I, I])
    assert not v.is_mub
    assert v.failures[0] == ((0, 1), (0, 0), Fraction(1))


@pytest.mark.parametrize("n", [3, 4, 5, 7, 8, 9])
def test_prime_power_systems_complete(n):
    S = prime_power_mub(n)
    assert is_mub_system(S).is_complete
    assert glavnaja_check(S.bases[1:]).ok


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_too_many_bases_rejected(n):
    S = prime_power_mub(n)
    v = is_mub_system(S.bases + [S.bases[1]])
    assert not v.is_mub and v.rejected and not v.failures


def test_non_orthonormal_precondition():
    bad = fourier(3).perturbed(0, 0, Fraction(1, 12))
    with pytest.raises(PreconditionError) as exc:
        is_mub_system([RingMatrix.identity(3), bad])
    assert exc.value.witness == [1]
    v = is_mub_system([RingMatrix.identity(3), bad], require_orthonormal=False)
    assert not v.is_mub and v.non_orthonormal == [1]


def test_normalize_standard_system_unchanged():
    S = prime_power_mub(3)
    T = normalize_to_muh(S)
    assert T.form == MUH_STANDARD and not T.nonflat
    for a, b in zip(S.bases, T.bases):
        np.testing.assert_allclose(as_complex(a), as_complex(b), atol=1e-12)


def test_normalize_moves_first_basis_to_identity():
    F3 = fourier(3)
    T = normalize_to_muh([F3, RingMatrix.identity(3)])
    assert isinstance(T.bases[0], RingMatrix) and T.bases[0].is_identity()
    np.testing.assert_allclose(as_complex(T.bases[1]), F3.to_complex().conj().T, atol=1e-12)


def _angle_spectrum(S):
    out = []
    for i in range(len(S.bases)):
        for j in range(i + 1, len(S.bases)):
            for a in range(S.n):
                for b in range(S.n):
                    out.append(angle_sq(column_of(S.bases[i], a), column_of(S.bases[j], b)))
    return sorted(out)


def test_normalize_preserves_angles():
    for name, S in randomized_systems(12, seed=3):
        T = normalize_to_muh(S)
        np.testing.assert_allclose([float(a) for a in _angle_spectrum(S)], [float(a) for a in _angle_spectrum(T)], atol=1e-12)


def test_normalize_flags_nonflat():
    F3 = fourier(3)
    T = normalize_to_muh([F3, F3])
    assert T.nonflat == [1]
    Tf = normalize_to_muh([F3.to_complex(), F3.to_complex()], "float")
    assert Tf.nonflat == [1]


def test_glavnaja_repeated_fourier_fails():
    for n in range(2, 6):
        v = glavnaja_check([fourier(n)] * n)
        assert not v.ok and v.witness["kind"] == "orthogonality"


def test_glavnaja_wrong_count():
    with pytest.raises(StructuralError):
        glavnaja_check([fourier(3)] * 2)


def test_glavnaja_flags_non_hadamard():
    H = [fourier(3)] * 3
    H = [H[0].perturbed(1, 1, Fraction(1, 12))] + H[1:]
    v = glavnaja_check(H)
    assert not v.ok and v.witness == {"kind": "not_hadamard", "matrix": 0}


def test_float_backend_agrees():
    for name, S in randomized_systems(30, seed=9):
        F = to_float_system(S)
        e = is_mub_system(S)
        f = is_mub_system(F, "float")
        assert e.is_complete == f.is_complete, name
        assert glavnaja_check(S.bases[1:]).ok == glavnaja_check(F.bases[1:], "float").ok
