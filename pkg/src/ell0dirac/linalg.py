"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` complex128 arrays. This module adds the
dimension-checked products used by the operator algebra, a cyclic complex
Jacobi eigensolver for Hermitian matrices, degeneracy clustering, and
:class:`ExactMatrix`, an exact representation for matrices with entries in
``Q(i)[sqrt(2)]``.

The Jacobi sweeps run in a compiled extension when it is importable; set
``ELL0DIRAC_PURE_PYTHON=1`` to force the numpy fallback.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import _jacobi_py

try:
    from . import _jacobi as _jacobi_c
except ImportError:  # extension not built
    _jacobi_c = None

if _jacobi_c is not None and not os.environ.get("ELL0DIRAC_PURE_PYTHON"):
    BACKEND = "compiled"
else:
    BACKEND = "python"

HERM_TOL = 1e-12
EIG_TOL = 1e-10
OFFDIAG_TOL = 1e-12
CLUSTER_TOL = 1e-8
MAX_SWEEPS = 100

SQRT2 = math.sqrt(2.0)


class DimensionError(ValueError):
    pass


class NonHermitianError(ValueError):
    def __init__(self, asymmetry, norm):
        self.asymmetry = asymmetry
        self.norm = norm
        super().__init__(
            f"matrix is not Hermitian: ||A - A^H||_F = {asymmetry:.3e} "
            f"(||A||_F = {norm:.3e}, tolerance {HERM_TOL:g} relative)"
        )


class ConvergenceError(RuntimeError):
    pass


def as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def pauli():
    """Return ``(I2, sigma1, sigma2, sigma3)`` as exact complex arrays."""
    i2 = np.array([[1, 0], [0, 1]], dtype=np.complex128)
    s1 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    s2 = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
    s3 = np.array([[1, 0], [0, -1]], dtype=np.complex128)
    return i2, s1, s2, s3


def kron(a, b) -> np.ndarray:
    """Kronecker product; ``a`` supplies the outermost block structure."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_chain(*factors) -> np.ndarray:
    out = as_matrix(factors[0])
    for f in factors[1:]:
        out = kron(out, f)
    return out


def _check_square_pair(a, b):
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise DimensionError(
            f"need two square matrices of equal size, got {a.shape} and {b.shape}"
        )
    return a, b


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def commutator(a, b) -> np.ndarray:
    a, b = _check_square_pair(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    a, b = _check_square_pair(a, b)
    return a @ b + b @ a


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def fro(a) -> float:
    return float(np.linalg.norm(a))


@dataclass
class SpectrumReport:
    """Eigenvalues (ascending) with residuals and degeneracy clusters."""

    eigenvalues: np.ndarray
    clusters: list
    max_residual: float
    vectors: np.ndarray | None = field(default=None, repr=False)

    @property
    def multiplicities(self):
        return [m for _, m in self.clusters]

    @property
    def values(self):
        return [v for v, _ in self.clusters]

    def to_dict(self):
        return {
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "clusters": [{"value": float(v), "multiplicity": int(m)} for v, m in self.clusters],
            "max_residual": float(self.max_residual),
        }


def cluster_eigenvalues(values, tol):
    """Group sorted ``values``; neighbours closer than ``tol`` share a cluster.

    Returns a list of ``(mean value, multiplicity)``.
    """
    clusters = []
    group = []
    for x in values:
        if group and abs(x - group[-1]) > tol:
            clusters.append((float(np.mean(group)), len(group)))
            group = []
        group.append(float(x))
    if group:
        clusters.append((float(np.mean(group)), len(group)))
    return clusters


def hermitian_eig(a, backend: str | None = None) -> SpectrumReport:
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi.

    Raises :class:`NonHermitianError` if ``||A - A^H||_F`` exceeds
    ``HERM_TOL * ||A||_F`` and :class:`ConvergenceError` if the off-diagonal
    norm does not drop below ``OFFDIAG_TOL * ||A||_F`` within ``MAX_SWEEPS``.
    """
    a = as_matrix(a)
    n, m = a.shape
    if n != m:
        raise DimensionError(f"hermitian_eig needs a square matrix, got {a.shape}")
    norm = fro(a)
    asym = fro(a - dagger(a))
    if asym > HERM_TOL * norm:
        raise NonHermitianError(asym, norm)

    work = np.ascontiguousarray(0.5 * (a + dagger(a)))
    vecs = np.ascontiguousarray(identity(n))
    kernel = _select(backend)
    sweeps = kernel.jacobi_sweeps(work, vecs, OFFDIAG_TOL * norm, MAX_SWEEPS)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps (n={n})")

    evals = np.diagonal(work).real.copy()
    order = np.argsort(evals, kind="stable")
    evals = evals[order]
    vecs = vecs[:, order]
    resid = a @ vecs - vecs * evals
    max_res = float(np.max(np.linalg.norm(resid, axis=0))) if n else 0.0
    clusters = cluster_eigenvalues(evals, CLUSTER_TOL * max(1.0, norm))
    return SpectrumReport(evals, clusters, max_res, vecs)


def _select(backend):
    name = backend or BACKEND
    if name == "compiled":
        if _jacobi_c is None:
            raise RuntimeError("compiled Jacobi kernel is not available")
        return _jacobi_c
    if name == "python":
        return _jacobi_py
    raise ValueError(f"unknown backend {name!r}")


def available_backends():
    return ["compiled", "python"] if _jacobi_c is not None else ["python"]


def eigenspace_projector(report: SpectrumReport, cluster_index: int) -> np.ndarray:
    """Orthogonal projector onto the eigenspace of one cluster."""
    start = sum(report.multiplicities[:cluster_index])
    stop = start + report.multiplicities[cluster_index]
    v = report.vectors[:, start:stop]
    return v @ dagger(v)


class ExactMatrix:
    """Matrix ``rational + sqrt(2) * irrational`` with dyadic complex parts.

    Entries of the generator matrices are in {0, +-1, +-i}; the operator
    algebra only ever scales them by halves and by sqrt(2). Keeping the two
    parts separate makes every product and sum exact in float64, so identity
    checks can demand bitwise equality.
    """

    __slots__ = ("rational", "irrational")

    def __init__(self, rational, irrational=None):
        self.rational = as_matrix(rational)
        if irrational is None:
            irrational = np.zeros_like(self.rational)
        self.irrational = as_matrix(irrational)
        if self.rational.shape != self.irrational.shape:
            raise DimensionError("rational and irrational parts differ in shape")

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros((n, n), dtype=np.complex128))

    @classmethod
    def eye(cls, n):
        return cls(identity(n))

    @property
    def shape(self):
        return self.rational.shape

    @property
    def value(self) -> np.ndarray:
        return self.rational + SQRT2 * self.irrational

    def scale(self, x=1, y=0):
        """Multiply by the scalar ``x + y*sqrt(2)``."""
        return ExactMatrix(
            x * self.rational + 2 * y * self.irrational,
            y * self.rational + x * self.irrational,
        )

    def __add__(self, other):
        other = _exact(other)
        _same_shape(self, other)
        return ExactMatrix(self.rational + other.rational, self.irrational + other.irrational)

    def __sub__(self, other):
        other = _exact(other)
        _same_shape(self, other)
        return ExactMatrix(self.rational - other.rational, self.irrational - other.irrational)

    def __neg__(self):
        return ExactMatrix(-self.rational, -self.irrational)

    def __mul__(self, scalar):
        return ExactMatrix(scalar * self.rational, scalar * self.irrational)

    __rmul__ = __mul__

    def __matmul__(self, other):
        other = _exact(other)
        if self.shape[1] != other.shape[0]:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        a, b = self.rational, self.irrational
        c, d = other.rational, other.irrational
        return ExactMatrix(a @ c + 2 * (b @ d), a @ d + b @ c)

    def __eq__(self, other):
        other = _exact(other)
        return (
            self.shape == other.shape
            and np.array_equal(self.rational, other.rational)
            and np.array_equal(self.irrational, other.irrational)
        )

    __hash__ = None

    def is_zero(self):
        return not self.rational.any() and not self.irrational.any()

    def dagger(self):
        return ExactMatrix(dagger(self.rational), dagger(self.irrational))

    def scalar_multiple_of_identity(self):
        """Return ``(x, y)`` if the matrix is ``(x + y*sqrt2) * I``, else None."""
        n = self.shape[0]
        x, y = self.rational[0, 0], self.irrational[0, 0]
        if self == ExactMatrix(x * identity(n), y * identity(n)):
            return x, y
        return None

    def __repr__(self):
        return f"ExactMatrix(shape={self.shape})"


def _exact(m):
    return m if isinstance(m, ExactMatrix) else ExactMatrix(m)


def _same_shape(a, b):
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")


def exact_commutator(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return a @ b - b @ a


def exact_anticommutator(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return a @ b + b @ a


def exact_deviation(lhs: ExactMatrix, rhs: ExactMatrix) -> float:
    """Largest entry of ``|lhs - rhs|`` after evaluating sqrt(2)."""
    return float(np.max(np.abs((lhs - rhs).value), initial=0.0))
