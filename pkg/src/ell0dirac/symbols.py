"""Plane-wave symbols of the fourth-order wave operator and its factorizations.

Convention: plane waves ``exp(i(k.x - omega t))``, so ``d/dt -> -i omega``
and ``d/dx_j -> i k_j``.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .clifford import CliffordBasis, build_paper_gammas, build_weyl_brauer
from .linalg import (
    SQRT2,
    DimensionError,
    SpectrumReport,
    cluster_eigenvalues,
    CLUSTER_TOL,
    fro,
    identity,
)
from .verification import Check, Report

UNIT_SYSTEMS = ("natural", "si-like")


@dataclass(frozen=True)
class PhysicalParams:
    c: float = 1.0
    hbar: float = 1.0
    m: float = 0.0
    q: float = 1.0
    g: float = 2.0
    ell0: float = 1.0
    kappa0: float = 1.0
    unit_system: str = "natural"

    def __post_init__(self):
        vals = {k: getattr(self, k) for k in ("c", "hbar", "m", "q", "g", "ell0", "kappa0")}
        for k, v in vals.items():
            if not math.isfinite(v):
                raise ValueError(f"{k} must be finite, got {v}")
        if self.c <= 0:
            raise ValueError(f"c must be positive, got {self.c}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        for k in ("m", "ell0", "kappa0"):
            if vals[k] < 0:
                raise ValueError(f"{k} must be nonnegative, got {vals[k]}")
        if self.unit_system not in UNIT_SYSTEMS:
            raise ValueError(f"unit_system must be one of {UNIT_SYSTEMS}, got {self.unit_system!r}")
        if self.unit_system == "natural" and (self.c != 1.0 or self.hbar != 1.0):
            raise ValueError("natural units require c = hbar = 1")

    @property
    def mu(self):
        """Magnetic moment scale g q / (2 m)."""
        if self.m <= 0:
            raise ValueError("the magnetic moment g q / (2 m) needs m > 0")
        return self.g * self.q / (2.0 * self.m)

    @property
    def mass_shell(self):
        """m^2 c^2 / hbar^2."""
        return (self.m * self.c / self.hbar) ** 2


@dataclass(frozen=True)
class WaveVector:
    k: tuple
    omega: float

    def __post_init__(self):
        k = tuple(float(x) for x in self.k)
        if len(k) != 3:
            raise ValueError("k must have three components")
        if not all(math.isfinite(x) for x in k + (self.omega,)):
            raise ValueError("wave vector components must be finite")
        object.__setattr__(self, "k", k)

    @property
    def k2(self):
        return sum(x * x for x in self.k)


def scalar_symbol(p: PhysicalParams, w: WaveVector) -> float:
    """omega^2/c^2 - k^2 - ell0^2 k^4."""
    k2 = w.k2
    return w.omega ** 2 / p.c ** 2 - k2 - p.ell0 ** 2 * k2 * k2


def _quadratic_part(k, basis):
    """k1^2 G4 + k2^2 G5 + k3^2 G6 + sqrt2 (k1 k2 G7 + k1 k3 G8 + k2 k3 G9)."""
    k1, k2, k3 = k
    return (k1 * k1 * basis[4] + k2 * k2 * basis[5] + k3 * k3 * basis[6]
            + SQRT2 * (k1 * k2 * basis[7] + k1 * k3 * basis[8] + k2 * k3 * basis[9]))


def _require_gamma_basis(basis):
    if len(basis) != 10 or basis.dim != 32:
        raise DimensionError(f"need the 10-generator dimension-32 basis, got {len(basis)} of dim {basis.dim}")


def dirac_symbol(p: PhysicalParams, w: WaveVector, basis: CliffordBasis) -> np.ndarray:
    _require_gamma_basis(basis)
    k1, k2, k3 = w.k
    lin = k1 * basis[1] + k2 * basis[2] + k3 * basis[3]
    return (w.omega / p.c) * basis[0] + 1j * lin - 1j * p.ell0 * _quadratic_part(w.k, basis)


def hamiltonian_symbol(p: PhysicalParams, k, basis: CliffordBasis) -> np.ndarray:
    """Hermitian 32x32 Hamiltonian for momentum hbar*k.

    H = m c^2 Gamma0 - i c hbar Gamma0 (k.Gamma - ell0 Q(k)); its square is
    (hbar omega)^2 with omega from :func:`dispersion_omega`.
    """
    _require_gamma_basis(basis)
    k1, k2, k3 = (float(x) for x in k)
    kin = k1 * basis[1] + k2 * basis[2] + k3 * basis[3] - p.ell0 * _quadratic_part((k1, k2, k3), basis)
    return p.m * p.c ** 2 * basis[0] - 1j * p.c * p.hbar * (basis[0] @ kin)


def dirac_symbol_spectrum(p: PhysicalParams, w: WaveVector, basis: CliffordBasis) -> SpectrumReport:
    """Spectrum of the (non-Hermitian) Dirac symbol when its scalar is positive.

    Uses D^2 = P I: the eigenvalues are +-sqrt(P), the spectral projectors are
    (I +- D/sqrt(P))/2 and their traces give the multiplicities.
    """
    d = dirac_symbol(p, w, basis)
    big_p = scalar_symbol(p, w)
    if big_p <= 0:
        raise ValueError(f"scalar symbol must be positive for a real spectrum, got {big_p}")
    root = math.sqrt(big_p)
    n = d.shape[0]
    eye = identity(n)
    values, vectors = [], []
    for sign in (-1.0, 1.0):
        proj = 0.5 * (eye + sign * d / root)
        rank = int(round(np.trace(proj).real))
        u, _, _ = np.linalg.svd(proj)
        vectors.append(u[:, :rank])
        values += [sign * root] * rank
    vecs = np.hstack(vectors)
    vals = np.array(values)
    resid = d @ vecs - vecs * vals
    max_res = float(np.max(np.linalg.norm(resid, axis=0)))
    clusters = cluster_eigenvalues(vals, CLUSTER_TOL * max(1.0, fro(d)))
    return SpectrumReport(vals, clusters, max_res, vecs)


def dispersion_omega(p: PhysicalParams, kmag: float) -> float:
    """Nonnegative frequency on the shell P(omega, k) = m^2 c^2 / hbar^2."""
    if kmag < 0:
        raise ValueError(f"|k| must be nonnegative, got {kmag}")
    k2 = kmag * kmag
    return p.c * math.sqrt(k2 * (1.0 + p.ell0 ** 2 * k2) + p.mass_shell)


def dispersion_sweep(p: PhysicalParams, kmin: float, kmax: float, steps: int):
    """Rows ``(k, omega, omega_classical)`` on a uniform grid, classical meaning ell0 = 0."""
    if not (0 <= kmin < kmax) or steps < 2:
        raise ValueError(f"need 0 <= kmin < kmax and steps >= 2, got {kmin}, {kmax}, {steps}")
    classical = PhysicalParams(p.c, p.hbar, p.m, p.q, p.g, 0.0, p.kappa0, p.unit_system)
    rows = []
    for k in np.linspace(kmin, kmax, steps):
        k = float(k)
        rows.append((k, dispersion_omega(p, k), dispersion_omega(classical, k)))
    return rows


def dispersion_csv(rows) -> str:
    buf = io.StringIO()
    buf.write("k,omega,omega_classical\n")
    for row in rows:
        buf.write(",".join(f"{x:.17g}" for x in row) + "\n")
    return buf.getvalue()


def _cross_matrix(k):
    k1, k2, k3 = k
    return np.array([[0, -k3, k2], [k3, 0, -k1], [-k2, k1, 0]], dtype=np.complex128)


def maxwell_symbol(p: PhysicalParams, w: WaveVector) -> np.ndarray:
    """6x6 matrix acting on (E, B).

    Rows 0-2: i k x E - i omega B (Faraday).
    Rows 3-5: i k x (B + ell0^2 (i k x)(i k x) B) + i (omega/c^2) E.
    """
    ik = 1j * _cross_matrix(w.k)
    eye = np.eye(3, dtype=np.complex128)
    m = np.zeros((6, 6), dtype=np.complex128)
    m[:3, :3] = ik
    m[:3, 3:] = -1j * w.omega * eye
    m[3:, :3] = 1j * w.omega / p.c ** 2 * eye
    m[3:, 3:] = ik @ (eye + p.ell0 ** 2 * ik @ ik)
    return m


def transverse_null_dim(p: PhysicalParams, w: WaveVector, rtol: float = 1e-10) -> int:
    """Dimension of the plane-wave solutions with k.E = k.B = 0.

    Singular values below ``rtol * sigma_max`` count as zero.
    """
    k = np.array(w.k, dtype=np.complex128)
    zero = np.zeros(3, dtype=np.complex128)
    system = np.vstack([maxwell_symbol(p, w), np.concatenate([k, zero]), np.concatenate([zero, k])])
    sv = np.linalg.svd(system, compute_uv=False)
    return int(np.sum(sv <= rtol * sv[0])) + (6 - len(sv))


def wave_reduction_check(p: PhysicalParams, w: WaveVector, b, rtol: float = 1e-12) -> Check:
    """Curl of the modified Ampere law with Faraday substituted, compared with
    (k^2 (1 + ell0^2 k^2) - omega^2/c^2) B. Skipped for non-transverse B."""
    b = np.asarray(b, dtype=np.complex128)
    k = np.array(w.k)
    anchor = "(-ell0^2 lap lap + box) B = 0 for solenoidal B"
    if abs(np.dot(k, b)) > 1e-12 * np.linalg.norm(k) * np.linalg.norm(b):
        return Check("wave-reduction", anchor, 0.0, False, skipped=True, note="k.B != 0")
    ik = 1j * _cross_matrix(w.k)
    lhs = ik @ (ik @ (b + p.ell0 ** 2 * (ik @ (ik @ b)))) - (w.omega ** 2 / p.c ** 2) * b
    rhs = (w.k2 * (1.0 + p.ell0 ** 2 * w.k2) - w.omega ** 2 / p.c ** 2) * b
    dev = float(np.linalg.norm(lhs - rhs))
    scale = max(np.linalg.norm(rhs), (w.k2 * (1 + p.ell0 ** 2 * w.k2) + w.omega ** 2 / p.c ** 2) * np.linalg.norm(b))
    return Check("wave-reduction", anchor, dev, dev <= rtol * scale)


def _draws(rng, samples):
    return rng.uniform(-2.0, 2.0, size=(samples, 4))


def verify_factorization(p: PhysicalParams, samples: int, seed: int,
                         basis: CliffordBasis | None = None, symbol=None) -> Report:
    """Random-sample check of D(omega,k)^2 = P(omega,k) I."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    basis = basis or build_paper_gammas()
    symbol = symbol or dirac_symbol
    rng = np.random.default_rng(seed)
    eye = identity(basis.dim)
    checks = []
    for i, (om, k1, k2, k3) in enumerate(_draws(rng, samples)):
        w = WaveVector((k1, k2, k3), om)
        d = symbol(p, w, basis)
        big_p = scalar_symbol(p, w)
        dev = fro(d @ d - big_p * eye)
        checks.append(Check(f"factorization[{i}]", "D0^2 = (-ell0^2 lap^2 + lap - dt^2/c^2) I",
                            dev, dev <= 1e-12 * (1.0 + abs(big_p))))
    return Report("factorization", checks, {"samples": samples, "seed": seed})


def verify_wave_reduction(p: PhysicalParams, samples: int, seed: int) -> Report:
    rng = np.random.default_rng(seed)
    checks = []
    for i in range(samples):
        om, *k = rng.uniform(-2.0, 2.0, size=4)
        k = np.array(k)
        b = rng.normal(size=3) + 1j * rng.normal(size=3)
        b -= k * np.dot(k, b) / np.dot(k, k)
        c = wave_reduction_check(p, WaveVector(tuple(k), om), b)
        checks.append(Check(f"wave-reduction[{i}]", c.anchor, c.max_abs_deviation, c.passed, c.skipped, c.note))
    return Report("wave-reduction", checks, {"samples": samples, "seed": seed})


def _require_bopp_basis(basis):
    if len(basis) != 14 or basis.dim != 128:
        raise DimensionError(f"need 14 generators of dimension 128, got {len(basis)} of dim {basis.dim}")


def bopp_symbol(p: PhysicalParams, w: WaveVector, basis: CliffordBasis) -> np.ndarray:
    """Plane-wave symbol whose square is (s - kappa0^2) s I, s = omega^2/c^2 - k^2."""
    _require_bopp_basis(basis)
    k1, k2, k3 = w.k
    oc = w.omega / p.c
    first = 1j * p.kappa0 * (oc * basis[0] + 1j * (k1 * basis[1] + k2 * basis[2] + k3 * basis[3]))
    second = -(oc * oc * basis[4] + k1 * k1 * basis[5] + k2 * k2 * basis[6] + k3 * k3 * basis[7])
    mixed_t = 1j * SQRT2 * oc * (k1 * basis[8] + k2 * basis[9] + k3 * basis[10])
    mixed_x = -SQRT2 * (k1 * k2 * basis[11] + k1 * k3 * basis[12] + k2 * k3 * basis[13])
    return first + second + mixed_t + mixed_x


def bopp_scalar(p: PhysicalParams, w: WaveVector) -> float:
    s = w.omega ** 2 / p.c ** 2 - w.k2
    return (s - p.kappa0 ** 2) * s


def verify_bopp_factorization(p: PhysicalParams, samples: int, seed: int,
                              basis: CliffordBasis | None = None) -> Report:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    basis = basis or build_weyl_brauer(7)
    _require_bopp_basis(basis)
    rng = np.random.default_rng(seed)
    eye = identity(basis.dim)
    checks = []
    for i, (om, k1, k2, k3) in enumerate(_draws(rng, samples)):
        w = WaveVector((k1, k2, k3), om)
        d = bopp_symbol(p, w, basis)
        target = bopp_scalar(p, w)
        dev = fro(d @ d - target * eye)
        checks.append(Check(f"bopp[{i}]", "D0^2 = (box - kappa0^2) box I",
                            dev, dev <= 1e-11 * (1.0 + abs(target))))
    return Report("bopp", checks, {"samples": samples, "seed": seed, "dim": basis.dim})
