import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ell0dirac.linalg import (
    BACKEND,
    DimensionError,
    ExactMatrix,
    NonHermitianError,
    SpectrumReport,
    anticommutator,
    available_backends,
    cluster_eigenvalues,
    commutator,
    dagger,
    eigenspace_projector,
    exact_commutator,
    hermitian_eig,
    identity,
    kron,
    matmul,
    pauli,
)

I2, S1, S2, S3 = pauli()


def random_hermitian(n, rng):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


def test_backend_is_selected():
    assert BACKEND in available_backends()


def test_kron_identity():
    assert np.array_equal(kron(I2, I2), identity(4))


def test_kron_sigma3_outermost():
    assert np.array_equal(kron(S3, I2), np.diag([1, 1, -1, -1]).astype(complex))


def test_kron_square_of_sigma_string():
    a = kron(S2, S3)
    assert np.array_equal(a @ a, identity(4))


def test_kron_entry_layout(rng):
    a = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    b = rng.standard_normal((4, 2))
    out = kron(a, b)
    assert out.shape == (8, 6)
    for i, j, k, l in [(1, 2, 3, 1), (0, 0, 0, 0), (1, 0, 2, 1)]:
        assert out[i * 4 + k, j * 2 + l] == a[i, j] * b[k, l]


def test_anticommutator_pauli():
    assert not anticommutator(S1, S2).any()
    assert np.array_equal(anticommutator(S1, S1), 2 * I2)


def test_anticommutator_gamma0_gamma5(basis):
    assert not anticommutator(basis[0], basis[5]).any()


def test_commutator_examples(blocks, rng):
    a = rng.standard_normal((5, 5))
    assert not commutator(a, a).any()
    assert np.array_equal(commutator(S1, S2), 2j * S3)
    assert not commutator(blocks[5], blocks[3]).any()


@pytest.mark.parametrize("fn", [commutator, anticommutator])
def test_dimension_mismatch_is_error(fn):
    with pytest.raises(DimensionError):
        fn(I2, identity(4))
    with pytest.raises(DimensionError):
        fn(np.ones((2, 3)), np.ones((2, 3)))


def test_matmul_dimension_error():
    with pytest.raises(DimensionError):
        matmul(np.ones((2, 3)), np.ones((2, 3)))
    assert matmul(np.ones((2, 3)), np.ones((3, 4))).shape == (2, 4)


def test_eig_examples(backend, ops):
    assert np.allclose(hermitian_eig(np.diag([3.0, 1.0, 2.0]), backend).eigenvalues, [1, 2, 3])
    assert np.allclose(hermitian_eig(S1, backend).eigenvalues, [-1, 1])
    rep = hermitian_eig(ops.S[2], backend)
    assert rep.clusters == [(-0.5, 8), (0.5, 8)]


def test_eig_rejects_non_hermitian(backend):
    a = np.array([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(NonHermitianError) as err:
        hermitian_eig(a, backend)
    assert err.value.asymmetry == pytest.approx(np.sqrt(8))


def test_eig_rejects_non_square():
    with pytest.raises(DimensionError):
        hermitian_eig(np.ones((2, 3)))


@pytest.mark.parametrize("n", [1, 2, 7, 16, 32])
def test_eig_matches_numpy(backend, rng, n):
    a = random_hermitian(n, rng)
    rep = hermitian_eig(a, backend)
    assert np.allclose(rep.eigenvalues, np.linalg.eigvalsh(a), atol=1e-11)
    norm = np.linalg.norm(a)
    assert rep.max_residual <= 1e-10 * max(1.0, norm)
    v = rep.vectors
    assert np.linalg.norm(v @ np.diag(rep.eigenvalues) @ dagger(v) - a) <= 1e-10 * norm
    assert np.linalg.norm(dagger(v) @ v - identity(n)) <= 1e-10
    assert sum(rep.multiplicities) == n


def test_backends_agree(rng):
    if len(available_backends()) < 2:
        pytest.skip("compiled kernel not built")
    a = random_hermitian(24, rng)
    e1 = hermitian_eig(a, "compiled").eigenvalues
    e2 = hermitian_eig(a, "python").eigenvalues
    assert np.allclose(e1, e2, atol=1e-12)


def test_unknown_backend():
    with pytest.raises(ValueError):
        hermitian_eig(np.eye(2), backend="fortran")


def test_cluster_rule():
    assert cluster_eigenvalues([0.0, 1e-9, 1.0, 1.0 + 5e-9, 2.0], 1e-8) == [
        (pytest.approx(5e-10), 2), (pytest.approx(1.0), 2), (2.0, 1)
    ]


def test_projector_is_idempotent(rng):
    a = np.diag([1.0, 1.0, 2.0, 3.0, 3.0, 3.0]).astype(complex)
    u, _ = np.linalg.qr(rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)))
    rep = hermitian_eig(u @ a @ dagger(u))
    p = eigenspace_projector(rep, 2)
    assert np.allclose(p @ p, p)
    assert np.trace(p).real == pytest.approx(3)


def test_spectrum_report_dict():
    rep = SpectrumReport(np.array([1.0, 1.0]), [(1.0, 2)], 0.0)
    assert rep.to_dict() == {"eigenvalues": [1.0, 1.0], "clusters": [{"value": 1.0, "multiplicity": 2}],
                             "max_residual": 0.0}


def test_exact_sqrt2_products_are_exact():
    half_root = ExactMatrix.eye(2).scale(0, 0.5)  # 1/sqrt2
    assert half_root @ half_root == ExactMatrix.eye(2) * 0.5
    # the float route is not exact, which is why ExactMatrix exists
    f = half_root.value
    assert not np.array_equal(f @ f, 0.5 * np.eye(2))


def test_exact_scalar_identity_detection():
    m = ExactMatrix(2 * identity(3), -identity(3))
    assert m.scalar_multiple_of_identity() == (2, -1)
    assert ExactMatrix(S1).scalar_multiple_of_identity() is None


def test_exact_commutator_pauli():
    assert exact_commutator(ExactMatrix(S1), ExactMatrix(S2)) == ExactMatrix(2j * S3)


exact_ints = st.integers(-4, 4)


@settings(max_examples=40, deadline=None)
@given(st.lists(exact_ints, min_size=14, max_size=14), st.lists(exact_ints, min_size=8, max_size=8))
def test_kron_associative(vals, cvals):
    a = np.array(vals[:4]).reshape(2, 2) + 1j * np.array(vals[4:8]).reshape(2, 2)
    b = np.array(vals[8:14]).reshape(2, 3)
    c = np.array(cvals).reshape(4, 2)
    assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_product_dagger(n, seed):
    r = np.random.default_rng(seed)
    a = r.standard_normal((n, n)) + 1j * r.standard_normal((n, n))
    b = r.standard_normal((n, n)) + 1j * r.standard_normal((n, n))
    lhs, rhs = dagger(a @ b), dagger(b) @ dagger(a)
    assert np.linalg.norm(lhs - rhs) <= 1e-13 * max(1.0, np.linalg.norm(lhs))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_eig_reconstruction_property(n, seed):
    a = random_hermitian(n, np.random.default_rng(seed))
    rep = hermitian_eig(a)
    v = rep.vectors
    assert len(rep.eigenvalues) == n
    assert np.all(np.diff(rep.eigenvalues) >= 0)
    assert np.linalg.norm(v @ np.diag(rep.eigenvalues) @ dagger(v) - a) <= 1e-10 * np.linalg.norm(a)


def test_env_forces_python_backend():
    import os
    import subprocess
    import sys

    env = dict(os.environ, ELL0DIRAC_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import ell0dirac; print(ell0dirac.BACKEND)"],
                         capture_output=True, text=True, env=env)
    assert out.stdout.strip() == "python"
