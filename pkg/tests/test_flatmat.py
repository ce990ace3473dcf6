from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mubkit.constructions import fourier_matrix
from mubkit.cyclotomic import CyclotomicInt
from mubkit.errors import StructuralError
from mubkit.flatmat import (
    FlatMatrix,
    RingMatrix,
    inner,
    is_hadamard,
    matrix_from_json,
    matrix_to_json,
    schur,
    schur_power,
)
from mubkit.group import AbelianGroup

from _systems import group_presentations

F = lambda *m: fourier_matrix(AbelianGroup(m))  # noqa: E731


def test_schur_examples():
    F3 = F(3)
    R = F3.rows()
    zeros = (Fraction(0),) * 3
    assert schur(R[1], zeros) == R[1]
    assert schur(R[1], R[2]) == R[0]
    assert schur(R[1], schur_power(R[1], -1)) == zeros
    with pytest.raises(StructuralError):
        schur(R[0], R[0][:2])


def test_schur_power_examples():
    R4 = F(4).rows()
    assert schur_power(R4[1], 0) == (Fraction(0),) * 4
    assert schur_power(R4[1], 2) == R4[2]
    R3 = F(3).rows()
    assert schur_power(R3[1], -1) == R3[2]


def test_inner_examples():
    R2 = F(2).rows()
    assert inner(R2[0], R2[0]).rational_value() == 2
    assert inner(R2[0], R2[1]).is_zero()
    e0 = RingMatrix.identity(3)
    col = F(3).with_normalized(True).to_ring()
    g = e0.adjoint_mul(col)
    v = CyclotomicInt.from_array(g.coeffs[0, 1]).abs_sq().rational_value() * g.scale_sq
    assert v == Fraction(1, 3)


phases = st.integers(0, 11).map(lambda k: Fraction(k, 12))
phase_rows = st.integers(1, 12).flatmap(
    lambda n: st.tuples(st.lists(phases, min_size=n, max_size=n), st.lists(phases, min_size=n, max_size=n))
)


@given(phase_rows)
def test_inner_conjugate_symmetry(uv):
    u, v = uv
    assert inner(u, v) == inner(v, u).conjugate()
    fu, fv = [float(x) for x in u], [float(x) for x in v]
    assert inner(fu, fv) == pytest.approx(complex(inner(u, v)), abs=1e-9)


@given(phase_rows)
def test_modulus_squared_rational_nonnegative(uv):
    u, v = uv
    m = inner(u, v).abs_sq()
    r = m.rational_value()
    if r is not None:
        assert r >= 0
        assert r == pytest.approx(abs(complex(inner(u, v))) ** 2, abs=1e-9)


@pytest.mark.parametrize("moduli", [m for m in group_presentations(12) if m != (1,)])
def test_fourier_is_hadamard(moduli):
    H = F(*moduli)
    assert is_hadamard(H)
    assert is_hadamard(H, "float")


def test_non_hadamard_inputs():
    ones = FlatMatrix(np.zeros((3, 3), dtype=np.int64), 1)
    assert not is_hadamard(ones)
    assert not is_hadamard(ones, "float")
    with pytest.raises(StructuralError):
        is_hadamard(FlatMatrix(np.zeros((2, 3), dtype=np.int64), 1))


def test_json_round_trip():
    H = F(2, 2).with_normalized(True)
    assert matrix_from_json(matrix_to_json(H)) == H
    I = matrix_from_json({"identity": 3})
    assert isinstance(I, RingMatrix) and I.is_identity()
    Z = matrix_from_json({"nroot": 4, "phases": [[0, None], [None, 1]], "normalized": False})
    assert isinstance(Z, RingMatrix)
    M = matrix_from_json({"re": [[1, 0], [0, 1]], "im": [[0, 0], [0, 0]]})
    assert np.allclose(M, np.eye(2))
    with pytest.raises(StructuralError):
        matrix_from_json({"nroot": 2, "phases": [[0, 1], [0]]})


def test_perturbation_lifts_root_order():
    H = F(3)
    P = H.perturbed(1, 1, Fraction(1, 12))
    assert P.nroot == 12
    assert not is_hadamard(P)
