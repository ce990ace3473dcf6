import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mubkit.constructions import (
    GENERAL,
    MOST_GENERAL,
    USLOVIE,
    HomogeneousSpec,
    TorusFunction,
    check_planarity,
    difference_matrices,
    fourier_matrix,
    function_matrix,
    half_square_function,
    homogeneous_system,
    is_diff_uniform,
    is_perfect_nonlinear,
    mub_from_function,
    planar_family,
    prime_power_mub,
    shifted_fourier,
    square_function,
    with_identity,
)
from mubkit.errors import DomainError, PreconditionError, StructuralError, UnsupportedDimensionError
from mubkit.field import FiniteField
from mubkit.flatmat import FlatMatrix, is_hadamard, schur
from mubkit.group import AbelianGroup
from mubkit.mubcheck import angle_sq, column_of, glavnaja_check, is_mub_system
from mubkit.flatmat import RingMatrix

from _systems import all_functions, group_presentations, random_torus_function


def G(*m):
    return AbelianGroup(m)


def test_fourier_examples():
    F2 = fourier_matrix(G(2))
    assert F2.rows() == [(0, 0), (0, Fraction(1, 2))]
    F5 = fourier_matrix(G(5))
    assert all(F5.entry(i, j) == Fraction(i * j % 5, 5) for i in range(5) for j in range(5))
    F22 = fourier_matrix(G(2, 2)).to_complex()
    F2c = F2.to_complex()
    np.testing.assert_allclose(F22, np.kron(F2c, F2c), atol=1e-12)


@pytest.mark.parametrize("moduli", group_presentations(12), ids=str)
def test_fourier_row_group(moduli):
    H = fourier_matrix(G(*moduli))
    Gr = G(*moduli)
    elems = list(Gr.elements())
    R = H.rows()
    assert np.array_equal(H.phases, H.phases.T)
    for a, b in itertools.product(range(len(elems)), repeat=2):
        assert schur(R[a], R[b]) == R[Gr.index(Gr.add(elems[a], elems[b]))]


def test_shifted_fourier():
    Z2 = G(2)
    assert shifted_fourier(Z2, [(0,), (1,)]) == fourier_matrix(Z2)
    with pytest.raises(PreconditionError) as exc:
        shifted_fourier(Z2, [(0,), (Fraction(1, 2),)])
    assert exc.value.witness == ((Fraction(0),), (Fraction(1, 2),))
    H = shifted_fourier(Z2, [(0.3,), (1.3,)])
    assert not H.exact and is_hadamard(H, "float")
    Z3 = G(3)
    X = [(Fraction(1, 5),), (Fraction(6, 5),), (Fraction(11, 5),)]
    assert is_hadamard(shifted_fourier(Z3, X))


def test_homogeneous_all_ones_repeats_h():
    H = fourier_matrix(G(3))
    ones = FlatMatrix(np.zeros((3, 3), dtype=np.int64), 1)
    mats = homogeneous_system(HomogeneousSpec(ones, H))
    assert all(m == H.with_normalized(True) for m in mats)
    assert not is_mub_system(with_identity(mats)).is_mub


def test_homogeneous_spec_rejects_non_hadamard():
    ones = FlatMatrix(np.zeros((3, 3), dtype=np.int64), 1)
    with pytest.raises(PreconditionError):
        HomogeneousSpec(ones, ones)
    with pytest.raises(StructuralError):
        HomogeneousSpec(ones, fourier_matrix(G(2)))


@pytest.mark.parametrize("pk", [(3, 1), (2, 2)])
def test_homogeneous_constructions_complete(pk):
    F = FiniteField(*pk)
    f = square_function(F) if pk[0] > 2 else half_square_function(F)
    mats = homogeneous_system(HomogeneousSpec(function_matrix(f), fourier_matrix(F.additive_group)))
    assert is_mub_system(with_identity(mats)).is_complete


def test_mub_from_square_and_half_square():
    mats = mub_from_function(square_function(FiniteField(3)))
    assert glavnaja_check(mats).ok
    zero = TorusFunction(G(3), G(3), {g: (0,) for g in G(3).elements()})
    assert not is_mub_system(with_identity(mub_from_function(zero))).is_mub
    # over GF(2): r-th matrix is diag(1, i^r) F_2
    mats = mub_from_function(half_square_function(FiniteField(2)))
    expected = [np.array([[0, 0], [0, 2]]), np.array([[0, 0], [1, 3]])]
    for m, e in zip(mats, expected):
        assert np.array_equal(m.lift(4).phases, e)


def test_size_mismatch():
    f = TorusFunction(G(2), G(3), {(0,): (0,), (1,): (1,)})
    with pytest.raises(StructuralError):
        mub_from_function(f)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_square_is_planar(p):
    assert check_planarity(square_function(FiniteField(p)), USLOVIE).ok


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_linear_functions_fail(p):
    Z = G(p)
    for c in range(p):
        f = TorusFunction(Z, Z, {(x,): (c * x % p,) for x in range(p)})
        v = check_planarity(f, USLOVIE)
        assert not v.ok
        g1, g2, g3, g4 = v.witness
        assert Z.add(g1, g2) == Z.add(g3, g4)


def test_half_square_gf2_quadruple():
    f = half_square_function(FiniteField(2))
    assert check_planarity(f, GENERAL).ok
    with pytest.raises(DomainError):
        check_planarity(f, USLOVIE)
    with pytest.raises(DomainError):
        check_planarity(f, "nonsense")
    assert check_planarity(f, "most-general").ok


def _implication(f):
    levels = []
    for level in (USLOVIE, GENERAL, MOST_GENERAL):
        try:
            levels.append(check_planarity(f, level).ok)
        except DomainError:
            levels.append(False)
    assert levels == sorted(levels)  # False before True: uslovie => general => most_general
    return levels


@pytest.mark.parametrize("moduli", [(2,), (3,), (4,), (2, 2)], ids=str)
def test_completeness_iff_planar_every_small_function(moduli):
    """Most-general planarity iff the homogeneous system is complete, over all f with values in (1/2)Z."""
    Gr = G(*moduli)
    if Gr.rank == 1:
        values = [(Fraction(k, 2),) for k in range(2 * moduli[0])]
    else:
        values = list(itertools.product([Fraction(k, 2) for k in range(4)], repeat=2))
    fs = all_functions(Gr, values)
    if len(fs) > 3000:
        fs = fs[:: len(fs) // 3000 + 1]
    complete = 0
    for f in fs:
        lv = _implication(f)
        v = is_mub_system(with_identity(mub_from_function(f))).is_complete
        assert lv[2] == v
        complete += v
    # Z_4 admits none: the forbidden subgroup of a (4,4,4,1) set must be elementary abelian
    assert (complete > 0) == (moduli != (4,))


@settings(max_examples=80)
@given(st.sampled_from([m for m in group_presentations(9) if m != (1,)]), st.integers(0, 2**32 - 1))
def test_completeness_iff_planar_random_functions(moduli, seed):
    Gr = G(*moduli)
    f = random_torus_function(Gr, np.random.default_rng(seed), denominators=(1, 2, 3, 4))
    lv = _implication(f)
    assert lv[2] == is_mub_system(with_identity(mub_from_function(f))).is_complete


def test_float_most_general():
    f = half_square_function(FiniteField(2, 2))
    ff = TorusFunction(f.domain, f.codomain, {g: tuple(float(c) + 0.0 for c in v) for g, v in f.table.items()})
    assert check_planarity(ff, MOST_GENERAL).ok
    shifted = ff.shifted((0.123, 0.77))
    assert check_planarity(shifted, MOST_GENERAL).ok
    assert is_mub_system(with_identity(mub_from_function(shifted)), "float").is_complete


def test_family_examples():
    for p, k in [(3, 1), (5, 1), (3, 2), (7, 1)]:
        assert planar_family("dembowski-ostrom", p, k, alpha=0) == square_function(FiniteField(p, k))
    assert planar_family("coulter-matthews", 3, 1, alpha=1) == square_function(FiniteField(3))
    dy = planar_family("ding-yuan", 3, 1, u=1)
    # x^10 - x^6 - x^2 on GF(3)
    assert [dy((x,))[0] for x in range(3)] == [Fraction((x**10 - x**6 - x**2) % 3) for x in range(3)]
    assert check_planarity(planar_family("dembowski-ostrom", 3, 3, alpha=1), USLOVIE).ok


def test_family_parameter_checks():
    with pytest.raises(DomainError):
        planar_family("dembowski-ostrom", 3, 2, alpha=1)  # k / gcd(k, alpha) = 2
    with pytest.raises(DomainError):
        planar_family("coulter-matthews", 5, 1, alpha=1)
    with pytest.raises(DomainError):
        planar_family("coulter-matthews", 3, 2, alpha=2)
    with pytest.raises(DomainError):
        planar_family("ding-yuan", 3, 2, u=1)
    with pytest.raises(DomainError):
        planar_family("ding-yuan", 3, 3, u=0)
    with pytest.raises(DomainError):
        planar_family("dembowski-ostrom", 2, 2, alpha=1)
    with pytest.raises(DomainError):
        planar_family("unknown", 3, 1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_difference_matrices_square(p):
    F = FiniteField(p)
    D = difference_matrices(function_matrix(square_function(F)), F.additive_group)
    assert len(D) == p - 1 and all(ok for _, ok in D.values())


@pytest.mark.parametrize("moduli", [(2,), (3,), (4,), (2, 2), (5,)], ids=str)
def test_difference_matrices_of_fourier(moduli):
    Gr = G(*moduli)
    D = difference_matrices(fourier_matrix(Gr), Gr)
    for delta, (M, ok) in D.items():
        assert not ok
        assert all(np.array_equal(M.phases[i], M.phases[0]) for i in range(M.shape[0]))


def test_difference_matrices_trivial_group():
    one = G(1)
    assert difference_matrices(fourier_matrix(one), one) == {}


@pytest.mark.parametrize("moduli", [(3,), (2, 2), (5,), (4,)], ids=str)
def test_difference_matrices_match_completeness(moduli):
    Gr = G(*moduli)
    rng = np.random.default_rng(sum(moduli))
    for _ in range(20):
        f = random_torus_function(Gr, rng)
        A = function_matrix(f)
        all_had = all(ok for _, ok in difference_matrices(A, Gr).values())
        assert all_had == is_mub_system(with_identity(mub_from_function(f))).is_complete


def test_prime_power_mub_sizes_and_errors():
    assert len(prime_power_mub(2).bases) == 3
    assert len(prime_power_mub(9).bases) == 10
    with pytest.raises(UnsupportedDimensionError, match="not a prime power"):
        prime_power_mub(6)


def test_differential_properties():
    F5 = FiniteField(5)
    sq = square_function(F5)
    assert is_diff_uniform(sq) and is_perfect_nonlinear(sq)
    const = TorusFunction(G(5), G(5), {g: (Fraction(2),) for g in G(5).elements()})
    assert not is_diff_uniform(const) and not is_perfect_nonlinear(const)
    with pytest.raises(DomainError):
        is_perfect_nonlinear(TorusFunction(G(4), G(3), {g: (0,) for g in G(4).elements()}))
    # |G| > |N|: x mod 2 from Z_4 to Z_2 is not perfect nonlinear
    f = TorusFunction(G(4), G(2), {(x,): (x * x % 2,) for x in range(4)})
    assert not is_perfect_nonlinear(f)


@pytest.mark.parametrize("moduli", [(3,), (2, 2), (4,), (5,)], ids=str)
def test_planar_iff_differential_on_integer_functions(moduli):
    Gr = G(*moduli)
    rng = np.random.default_rng(7)
    for _ in range(60):
        f = random_torus_function(Gr, rng, denominators=(1,))
        u = check_planarity(f, USLOVIE).ok
        assert u == is_diff_uniform(f) == is_perfect_nonlinear(f)


@pytest.mark.parametrize("pk", [(3, 1), (5, 1), (2, 2), (3, 2)])
def test_unbiased_vector_extension(pk):
    F = FiniteField(*pk)
    f = square_function(F) if pk[0] > 2 else half_square_function(F)
    mats = mub_from_function(f)
    H = fourier_matrix(F.additive_group).with_normalized(True)
    n = H.shape[0]
    Hf = fourier_matrix(F.additive_group)
    for M in mats[1:]:
        v = M.column(1)
        basis = FlatMatrix.from_fractions([list(schur(Hf.row(a), v)) for a in range(n)], normalized=True).transpose()
        S = [RingMatrix.identity(n), H, basis]
        assert is_mub_system(S).is_mub
