"""Stern-Gerlach model: field, simplified Hamiltonian, force operator and beam lines.

The model keeps only the field couplings: momentum terms, precession and the
scalar potential are dropped, and an electron crossing the magnet picks up the
impulse ``dt * F`` without any trajectory integration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .linalg import SQRT2, SpectrumReport, cluster_eigenvalues, hermitian_eig
from .pauli import PauliOperatorSet, levi_civita
from .symbols import PhysicalParams
from .verification import Check, Report

FD_REL = 1e-5
FD_TOL = 1e-6
THETA_TOL = 1e-10
LINE_LABELS = ("++", "+-", "-+", "--")


class DegenerateModelError(ValueError):
    """The field has no gradient, so the splitting direction is undefined."""


class InternalConsistencyError(RuntimeError):
    """Closed-form and finite-difference force operators disagree."""


@dataclass(frozen=True)
class FieldModel:
    """B = (-b1 x - b3 x^3/3, 0, B0 + b1 z + b3 x^2 z)."""

    B0: float = 1.0
    beta1: float = 1.0
    beta3: float = 1.0

    def __post_init__(self):
        for name in ("B0", "beta1", "beta3"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)

    @property
    def d(self) -> float:
        """sqrt(|beta1 / beta3|); infinite for a purely linear field."""
        if self.beta3 == 0:
            return math.inf
        return math.sqrt(abs(self.beta1 / self.beta3))


def field_eval(f: FieldModel, x):
    """Return ``(B, gradB, hessB)`` with ``gradB[i, j] = d_j B_i`` and ``hessB[i, j, k] = d_j d_k B_i``."""
    x1, _, x3 = (float(v) for v in x)
    b1, b3 = f.beta1, f.beta3
    B = np.array([-b1 * x1 - b3 * x1**3 / 3.0, 0.0, f.B0 + b1 * x3 + b3 * x1 * x1 * x3])
    grad = np.zeros((3, 3))
    grad[0, 0] = -b1 - b3 * x1 * x1
    grad[2, 0] = 2.0 * b3 * x1 * x3
    grad[2, 2] = b1 + b3 * x1 * x1
    hess = np.zeros((3, 3, 3))
    hess[0, 0, 0] = -2.0 * b3 * x1
    hess[2, 0, 0] = 2.0 * b3 * x3
    hess[2, 0, 2] = hess[2, 2, 0] = 2.0 * b3 * x1
    return B, grad, hess


def vector_potential(f: FieldModel, x) -> np.ndarray:
    """A = (0, B0 x + b1 x z + b3 x^3 z / 3, 0); vanishes on the beam line x = z = 0."""
    x1, _, x3 = (float(v) for v in x)
    return np.array([0.0, f.B0 * x1 + f.beta1 * x1 * x3 + f.beta3 * x1**3 * x3 / 3.0, 0.0])


def _tcal_dot_hess(ops: PauliOperatorSet, hess, reduced: bool):
    tc = ops.tcal
    out = np.zeros((ops.dim, ops.dim), dtype=np.complex128)
    for j in range(3):
        if reduced:
            # only the d_x^2 slot survives in the reduced operator
            if hess[j, 0, 0]:
                out += tc[j, 0, 0] * hess[j, 0, 0]
            continue
        for k, m in product(range(3), range(3)):
            if hess[j, k, m]:
                out += tc[j, k, m] * hess[j, k, m]
    return out


def hamiltonian(p: PhysicalParams, ops: PauliOperatorSet, f: FieldModel, x, reduced: bool = True):
    """H(x) = -mu [S.B - (ell0^2 / sqrt2) T.B].

    ``reduced`` keeps only the d_x^2 part of the T operator. With ``False`` all
    second derivatives of B are contracted, which adds a z-independent term
    proportional to ``beta3 * x`` and leaves F_z unchanged.
    """
    B, _, hess = field_eval(f, x)
    s = ops.S
    sb = s[0] * B[0] + s[1] * B[1] + s[2] * B[2]
    tb = _tcal_dot_hess(ops, hess, reduced)
    return -p.mu * (sb - (p.ell0**2 / SQRT2) * tb)


def force_z_closed(p: PhysicalParams, ops: PauliOperatorSet, f: FieldModel, x):
    x1 = float(x[0])
    return p.mu * ((f.beta1 + f.beta3 * x1 * x1) * ops.S[2] - SQRT2 * f.beta3 * p.ell0**2 * ops.T3)


def force_z_fd(p: PhysicalParams, ops: PauliOperatorSet, f: FieldModel, x):
    """-dH/dz by central differences; also returns the step used."""
    x = np.asarray(x, dtype=float)
    h = FD_REL * max(1.0, abs(x[2]))
    up, down = x.copy(), x.copy()
    up[2] += h
    down[2] -= h
    hp = hamiltonian(p, ops, f, up)
    hm = hamiltonian(p, ops, f, down)
    return -(hp - hm) / (2.0 * h), h, max(np.abs(hp).max(), np.abs(hm).max())


def force_z(p: PhysicalParams, ops: PauliOperatorSet, f: FieldModel, x, check: bool = True):
    """z-component of F = -grad H, cross-checked against finite differences."""
    closed = force_z_closed(p, ops, f, x)
    if check:
        fd, h, hmax = force_z_fd(p, ops, f, x)
        dev = float(np.abs(fd - closed).max())
        # H is linear in z, so only rounding in H(z +- h) limits the difference
        tol = FD_TOL * float(np.abs(closed).max()) + 10.0 * np.finfo(float).eps * hmax / h
        if dev > tol:
            raise InternalConsistencyError(
                f"finite-difference F_z deviates by {dev:.3e} (tolerance {tol:.3e}) at x={list(x)}"
            )
    return closed


def _require_gradient(f: FieldModel):
    if f.beta1 == 0:
        raise DegenerateModelError("beta1 = 0: the force operator has no splitting direction")


def force_spectrum(p: PhysicalParams, ops: PauliOperatorSet, f: FieldModel) -> SpectrumReport:
    """Eigen-decomposition of F_z on the beam line x = 0."""
    _require_gradient(f)
    return hermitian_eig(force_z(p, ops, f, (0.0, 0.0, 0.0)))


def predicted_lines(p: PhysicalParams, f: FieldModel):
    """+-(mu b1 hbar / 2)(1 +- sqrt2 ell0^2 / d^2) keyed by line label."""
    base = p.mu * f.beta1 * p.hbar / 2.0
    r = SQRT2 * p.ell0**2 / f.d**2
    return {"++": base * (1 + r), "+-": base * (1 - r), "-+": -base * (1 + r), "--": -base * (1 - r)}


@dataclass(frozen=True)
class LineSector:
    label: str
    value: float
    projector: np.ndarray = field(repr=False)


def line_sectors(p: PhysicalParams, ops: PauliOperatorSet, f: FieldModel):
    """The four joint eigenspaces of S3 and T3 with their F_z(0) eigenvalues.

    F_z(0) is a combination of the commuting S3 and T3, so these sectors stay
    well defined when two lines coincide (ell0 = 0 or the critical ratio).
    The first label sign is the S3 sign. The second is the sign in front of
    sqrt2 ell0^2 / d^2.
    """
    _require_gradient(f)
    s3, t3 = ops.S[2], ops.T3
    ref = hermitian_eig((s3 - t3 / 3.0) / p.hbar)
    fz = force_z(p, ops, f, (0.0, 0.0, 0.0))
    slope = 1.0 if f.beta1 * f.beta3 >= 0 else -1.0
    out = {}
    start = 0
    for mult in ref.multiplicities:
        v = ref.vectors[:, start:start + mult]
        start += mult
        proj = v @ v.conj().T
        tr = float(np.trace(proj).real)
        s = 1 if np.trace(proj @ s3).real > 0 else -1
        t = 1 if np.trace(proj @ t3).real > 0 else -1
        inner = -s * t * slope
        label = ("+" if s > 0 else "-") + ("+" if inner > 0 else "-")
        out[label] = LineSector(label, float(np.trace(proj @ fz).real) / tr, proj)
    return [out[lab] for lab in LINE_LABELS]


@dataclass(frozen=True)
class SpinorState:
    xi: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=np.complex128).reshape(-1)
        if xi.shape != (16,):
            raise ValueError(f"a spinor has 16 components, got {xi.size}")
        norm = np.linalg.norm(xi)
        if not norm > 0 or not math.isfinite(norm):
            raise ValueError("spinor must have finite nonzero norm")
        object.__setattr__(self, "xi", xi / norm)


@dataclass
class BeamReport:
    lines: list  # (label, p_z, weight)
    mean_plus: float
    mean_minus: float
    distinct_lines: int
    params: dict

    def to_dict(self):
        return {
            "lines": [{"label": lab, "p_z": float(pz), "weight": float(w)} for lab, pz, w in self.lines],
            "mean_plus": float(self.mean_plus),
            "mean_minus": float(self.mean_minus),
            "distinct_lines": int(self.distinct_lines),
            "params": self.params,
        }

    def to_json(self, extra=None) -> str:
        d = dict(extra or {})
        d.update(self.to_dict())
        return json.dumps(d, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        rows = ["label,p_z,weight"]
        rows += [f"{lab},{pz:.17g},{w:.17g}" for lab, pz, w in self.lines]
        return "\n".join(rows) + "\n"


def random_spinors(n: int, seed: int) -> np.ndarray:
    """``n`` random unit 16-vectors with independent complex normal components."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, 16)) + 1j * rng.standard_normal((n, 16))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def simulate_beam(p: PhysicalParams, ops: PauliOperatorSet, f: FieldModel, xi0, dt: float,
                  n: int = 1, seed: int = 0) -> BeamReport:
    """Line positions ``dt * lambda_i`` and their intensities for one beam.

    ``xi0`` is a :class:`SpinorState` or the string ``"unpolarized"``, in which
    case the weights are averaged over ``n`` seeded random spinors.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not dt > 0:
        raise ValueError("dt must be positive")
    sectors = line_sectors(p, ops, f)
    if isinstance(xi0, str):
        if xi0 != "unpolarized":
            raise ValueError(f"unknown beam state {xi0!r}")
        states = random_spinors(n, seed)
    else:
        states = np.atleast_2d(SpinorState(xi0.xi if isinstance(xi0, SpinorState) else xi0).xi)

    weights = []
    for sec in sectors:
        amp = states @ sec.projector.T
        w = np.sum(np.abs(amp) ** 2, axis=1)
        weights.append(float(np.mean(w)))
    total = sum(weights)
    weights = [w / total for w in weights]

    pz = [dt * sec.value for sec in sectors]
    lines = [(sec.label, v, w) for sec, v, w in zip(sectors, pz, weights)]
    mean_plus = (pz[0] + pz[1]) / 2.0
    mean_minus = (pz[2] + pz[3]) / 2.0
    scale = max(abs(v) for v in pz) or 1.0
    distinct = len(cluster_eigenvalues(sorted(pz), 1e-8 * scale))
    params = {
        "c": p.c, "hbar": p.hbar, "m": p.m, "q": p.q, "g": p.g, "ell0": p.ell0,
        "B0": f.B0, "beta1": f.beta1, "beta3": f.beta3, "dt": dt,
        "state": xi0 if isinstance(xi0, str) else "given", "samples": n, "seed": seed,
    }
    return BeamReport(lines, mean_plus, mean_minus, distinct, params)


def theta_direct(p: PhysicalParams, ops: PauliOperatorSet, hess) -> np.ndarray:
    """-(ell0/hbar)^2 (i hbar^3 q / 4) eps_lnj B_j,km [klmn], summed directly."""
    bt = ops.brackets
    acc = np.zeros((ops.dim, ops.dim), dtype=np.complex128)
    for j, k, l, m, n in product(range(3), repeat=5):
        eps = levi_civita(l, n, j)
        if eps and hess[j, k, m]:
            acc += eps * hess[j, k, m] * bt[k, l, m, n].value
    return -(p.ell0 / p.hbar) ** 2 * (1j * p.hbar**3 * p.q / 4.0) * acc


def theta_contracted(p: PhysicalParams, ops: PauliOperatorSet, hess) -> np.ndarray:
    """-sqrt2 ell0^2 q T.B using the symmetrized T coefficients."""
    return -SQRT2 * p.ell0**2 * p.q * _tcal_dot_hess(ops, hess, reduced=False)


def verify_theta_reduction(p: PhysicalParams, ops: PauliOperatorSet, f: FieldModel, points) -> Report:
    if not math.isclose(ops.hbar, p.hbar, rel_tol=0, abs_tol=0):
        raise ValueError("operator set and parameters use different hbar")
    checks = []
    for i, x in enumerate(points):
        _, _, hess = field_eval(f, x)
        a = theta_direct(p, ops, hess)
        b = theta_contracted(p, ops, hess)
        dev = float(np.abs(a - b).max())
        scale = max(float(np.abs(a).max()), float(np.abs(b).max()))
        ok = dev <= THETA_TOL * scale if scale > 0 else dev == 0.0
        checks.append(Check(
            f"IIIc-routes[{i}]",
            "IIIc = -(ell0/hbar)^2 (i hbar^3 q/4) eps_lnj B_j,km [klmn] = -sqrt2 ell0^2 q T.B",
            dev, ok, note=f"x=({x[0]:.6g}, {x[1]:.6g}, {x[2]:.6g}) scale={scale:.3e}",
        ))
    return Report("theta-reduction", checks)
