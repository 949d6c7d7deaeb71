import io
import math

import numpy as np
import pytest
import scipy.sparse as sp

from chiral_qpt import fock
from chiral_qpt.errors import TruncationLeakage
from chiral_qpt.fock import DOWN, UP, FockBasis
from chiral_qpt.model import ModelParams, derive_couplings

from conftest import basis


def test_index_roundtrip():
    b = FockBasis(4)
    for i in range(b.dim):
        assert b.index(*b.label(i)) == i
    assert b.index(DOWN, 0, 0) == b.orbital_dim
    with pytest.raises(IndexError):
        b.index(UP, 5, 0)


def test_invalid_cutoff():
    with pytest.raises(ValueError):
        FockBasis(0)


def test_ladder_action():
    b = FockBasis(5)
    v = b.basis_vector(UP, 2, 3)
    w = fock.ladder(b, "l", "raise") @ v
    assert w[b.index(UP, 2, 4)] == pytest.approx(2.0)
    w = fock.ladder(b, "r", "lower") @ v
    assert w[b.index(UP, 1, 3)] == pytest.approx(math.sqrt(2))
    top = b.basis_vector(UP, 5, 0)
    assert np.allclose(fock.ladder(b, "r", "raise") @ top, 0.0)


def test_canonical_commutator_interior():
    b = basis(12)
    rows = b.interior(1)
    for mode in fock.MODES:
        a = fock.ladder(b, mode)
        c = (a @ a.conj().T - a.conj().T @ a).toarray()[np.ix_(rows, rows)]
        assert np.allclose(c, np.eye(rows.size))


def test_tilde_ladders_canonical():
    b = basis(16)
    c = derive_couplings(ModelParams.from_ratio(0.4, 2.0))
    ar = fock.tilde_ladder(b, c, "r")
    al = fock.tilde_ladder(b, c, "l")
    rows = b.interior(2)
    comm = (ar @ ar.conj().T - ar.conj().T @ ar).toarray()[np.ix_(rows, rows)]
    assert np.allclose(comm, np.eye(rows.size), atol=1e-12)
    cross = (ar @ al - al @ ar).toarray()[np.ix_(rows, rows)]
    assert np.allclose(cross, 0.0, atol=1e-12)


def test_tilde_ladder_needs_finite_width():
    c = derive_couplings(ModelParams(0.4, 0.0))
    with pytest.raises(ValueError):
        fock.tilde_ladder(basis(4), c, "r")


@pytest.mark.parametrize("ratio", [None, 0.5, 3.0])
def test_lz_from_quadratures(ratio):
    b = basis(10)
    c = None if ratio is None else derive_couplings(ModelParams.from_ratio(0.4, ratio))
    lz_q = fock.lz_from_quadratures(b, c).toarray()
    rows = b.interior(2)
    expected = fock.angular_momentum_lz(b).toarray()
    assert np.allclose(lz_q[np.ix_(rows, rows)], expected[np.ix_(rows, rows)], atol=1e-10)


def test_squeeze_unitary_and_casimir():
    b = basis(30)
    u, leak = fock.squeeze_unitary(b, 0.3)
    assert leak < 1e-8
    assert np.allclose(u.conj().T @ u, np.eye(b.dim), atol=1e-10)
    lz = fock.angular_momentum_lz(b).toarray()
    assert np.abs(u @ lz @ u.conj().T - lz).max() < 1e-8


def test_squeezed_vacuum_weights():
    b = basis(30)
    z = 0.4
    v = fock.apply_squeeze(b, z, b.basis_vector(UP, 0, 0))
    m = np.arange(10)
    expected = np.tanh(z) ** m / np.cosh(z)
    got = np.array([v[b.index(UP, k, k)] for k in m])
    assert np.allclose(got, expected, atol=1e-12)


def test_squeeze_leakage_raises_and_warns():
    b = FockBasis(8)
    with pytest.raises(TruncationLeakage) as info:
        fock.squeeze_unitary(b, 1.0)
    assert info.value.leakage > 1e-8
    with pytest.warns(RuntimeWarning):
        with pytest.raises(TruncationLeakage):
            fock.squeeze_unitary(b, 2.5)


def test_hermiticity_helpers():
    b = basis(4)
    n = fock.number(b, "r")
    assert fock.is_hermitian(n)
    assert not fock.is_hermitian(fock.ladder(b, "r"))


def test_triplet_roundtrip():
    b = basis(3)
    op = fock.squeeze_generator(b)
    buf = io.StringIO()
    fock.dump_triplets(op, buf)
    buf.seek(0)
    back = fock.load_triplets(buf)
    assert back.shape == op.shape
    assert abs(back - op).max() == 0
    assert buf.getvalue().startswith("# shape")


def test_operators_are_sparse():
    b = basis(6)
    assert sp.issparse(fock.sigma_z(b))
    assert sp.issparse(fock.sigma_plus(b))
    assert fock.identity(b).shape == (b.dim, b.dim)
