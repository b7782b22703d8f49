import numpy as np
import pytest

from phaseport.errors import DomainError, NotHermitian
from phaseport.linalg import (
    HermitianBasis,
    RankTolerance,
    gell_mann_basis,
    herm_eig,
    hs_inner,
    kron,
    numerical_rank,
    unvec,
    vec,
)


def test_kron_identity():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_single_entries():
    e00 = np.zeros((2, 2)); e00[0, 0] = 1
    e11 = np.zeros((2, 2)); e11[1, 1] = 1
    k = kron(e00, e11)
    expected = np.zeros((4, 4))
    expected[1, 1] = 1  # row 0*2+1, col 0*2+1
    assert np.array_equal(k, expected)


def test_vec_identity():
    assert np.array_equal(vec(np.eye(2)), [1, 0, 0, 1])


def test_vec_index_convention():
    e01 = np.zeros((2, 2)); e01[0, 1] = 1
    # entry at (a=0, b=1) lands at index b*rows + a = 2
    assert np.array_equal(vec(e01), [0, 0, 1, 0])


def test_vec_unvec_roundtrip():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    assert np.array_equal(unvec(vec(x), 3, 5), x)


def test_vec_kron_identity_random():
    rng = np.random.default_rng(1)
    for _ in range(100):
        dims = rng.integers(1, 5, size=4)
        a = rng.standard_normal((dims[0], dims[1])) + 1j * rng.standard_normal((dims[0], dims[1]))
        x = rng.standard_normal((dims[1], dims[2])) + 1j * rng.standard_normal((dims[1], dims[2]))
        b = rng.standard_normal((dims[2], dims[3])) + 1j * rng.standard_normal((dims[2], dims[3]))
        lhs = vec(a @ x @ b)
        rhs = kron(b.T, a) @ vec(x)
        assert np.abs(lhs - rhs).max() < 1e-12


def test_herm_eig_diag():
    w, v = herm_eig(np.diag([4.0, 0.0]))
    assert np.allclose(w, [0, 4])
    assert np.allclose(np.diag([4.0, 0.0]) @ v[:, 0], w[0] * v[:, 0])


def test_herm_eig_identity():
    w, _ = herm_eig(np.eye(5))
    assert np.allclose(w, 1)


def test_herm_eig_pauli_z():
    z = np.diag([1.0, -1.0])
    w, _ = herm_eig(z)
    assert np.allclose(w, [-1, 1])


def test_herm_eig_reconstruction():
    rng = np.random.default_rng(2)
    for _ in range(20):
        d = int(rng.integers(2, 6))
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        h = g + g.conj().T
        w, v = herm_eig(h)
        recon = v @ np.diag(w) @ v.conj().T
        assert np.abs(recon - h).max() < 1e-8 * max(np.abs(h).max(), 1)


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        herm_eig(np.array([[0, 1], [0, 0]], dtype=complex))
    with pytest.raises(NotHermitian):
        herm_eig(np.zeros((2, 3)))


def test_numerical_rank_zero_matrix():
    assert numerical_rank(np.zeros((3, 3))) == 0


def test_numerical_rank_kron_identity():
    assert numerical_rank(kron(np.eye(2).T, np.eye(2).conj())) == 4


def test_numerical_rank_dephasing_sum():
    e00 = np.diag([1.0, 0.0]); e11 = np.diag([0.0, 1.0])
    s = kron(e00.T, e00.conj()) + kron(e11.T, e11.conj())
    assert numerical_rank(s) == 2


def test_numerical_rank_unitary_invariance():
    rng = np.random.default_rng(3)
    base = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    base[:, 3] = base[:, 0] + base[:, 1]  # force rank 3
    r = numerical_rank(base)
    assert r == 3
    from phaseport.channels import random_unitary

    for _ in range(50):
        u = random_unitary(4, rng)
        v = random_unitary(4, rng)
        assert numerical_rank(u @ base @ v) == r


def test_rank_tolerance_validation():
    with pytest.raises(DomainError):
        RankTolerance(absolute_floor=0.0)
    with pytest.raises(DomainError):
        RankTolerance(relative_factor=-1.0)


def test_gell_mann_qubit_is_pauli_basis():
    basis = gell_mann_basis(2)
    x = np.array([[0, 1], [1, 0]])
    y = np.array([[0, -1j], [1j, 0]])
    z = np.diag([1, -1])
    assert np.allclose(basis.elements[0], np.eye(2) / np.sqrt(2))
    assert np.allclose(basis.elements[1], x / np.sqrt(2))
    assert np.allclose(basis.elements[2], y / np.sqrt(2))
    assert np.allclose(basis.elements[3], z / np.sqrt(2))


def test_gell_mann_d1():
    basis = gell_mann_basis(1)
    assert len(basis.elements) == 1
    assert np.allclose(basis.elements[0], [[1.0]])


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_gell_mann_orthonormal(d):
    basis = gell_mann_basis(d)
    assert len(basis.elements) == d * d
    gram = np.array(
        [[hs_inner(a, b) for a in basis.elements] for b in basis.elements]
    )
    assert np.abs(gram - np.eye(d * d)).max() < 1e-12
    for e in basis.traceless:
        assert abs(np.trace(e)) < 1e-12


def test_hermitian_basis_rejects_bad_input():
    good = gell_mann_basis(2)
    broken = list(good.elements)
    broken[1] = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(NotHermitian):
        HermitianBasis(dim=2, elements=tuple(broken))
