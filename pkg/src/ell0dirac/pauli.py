"""Operators of the nonrelativistic limit and exact checks of their identities.

Tensor indices 0, 1, 2 stand for x, y, z. The "(2,2) slot" of M+- in the
usual 1-based notation is index (1, 1) here; labels such as ``"1322"`` passed
to :meth:`BracketTensor.by_label` keep the 1-based form.

All G-level operators are :class:`~ell0dirac.linalg.ExactMatrix` values, so
every identity below is checked for exact equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np
import sympy

from .clifford import GBlocks, verify_gblocks
from .linalg import ExactMatrix, exact_anticommutator, exact_commutator, exact_deviation
from .verification import Check, Report

IDX = range(3)
Y = 1  # index of the y axis, the slot holding +-G5 in M+-


def levi_civita(i, j, k):
    return (i - j) * (j - k) * (k - i) // 2


def _inv_sqrt2(m: ExactMatrix) -> ExactMatrix:
    return m.scale(0, 0.5)


def _build_m(gb: GBlocks, y_sign):
    g = {k: ExactMatrix(gb[k]) for k in range(1, 10)}
    diag = {0: g[4], 1: g[5] * y_sign, 2: g[6]}
    off = {(0, 1): g[7], (0, 2): g[8], (1, 2): g[9]}
    rows = []
    for k in IDX:
        row = []
        for l in IDX:
            if k == l:
                row.append(diag[k])
            else:
                row.append(_inv_sqrt2(off[(min(k, l), max(k, l))]))
        rows.append(tuple(row))
    return tuple(rows)


@dataclass(frozen=True)
class PauliOperatorSet:
    """V, M+-, M0, Sigma and the hbar-scaled S, T3 built from the G blocks."""

    blocks: GBlocks
    hbar: float
    V: tuple
    Mplus: tuple
    Mminus: tuple
    M0: tuple
    Sigma: tuple
    S_unit: tuple
    T3_unit: ExactMatrix

    @property
    def S(self) -> np.ndarray:
        return self.hbar * np.array([s.value for s in self.S_unit])

    @property
    def T3(self) -> np.ndarray:
        return self.hbar * self.T3_unit.value

    @property
    def dim(self):
        return self.blocks.dim

    @cached_property
    def brackets(self) -> "BracketTensor":
        return build_bracket_tensor(self)

    @cached_property
    def theta(self) -> "ThetaTable":
        return build_theta(self, self.brackets)

    @cached_property
    def tcal(self) -> np.ndarray:
        """T-operator coefficients (i hbar/4) Theta at this set's hbar, shape (3, 3, 3, n, n)."""
        return self.theta.tcal(self.hbar)


def build_operator_set(gb: GBlocks, hbar: float = 1.0) -> PauliOperatorSet:
    g = {k: ExactMatrix(gb[k]) for k in range(1, 10)}
    V = (g[1], g[2], g[3])
    mplus = _build_m(gb, 1)
    mminus = _build_m(gb, -1)
    m0 = _build_m(gb, 0)

    zero = ExactMatrix.zeros(gb.dim)
    sigma = []
    for j in IDX:
        acc = zero
        for k, m in product(IDX, IDX):
            eps = levi_civita(k, m, j)
            if eps:
                acc = acc + (V[k] @ V[m]) * eps
        sigma.append(acc * (-0.5j))
    sigma = tuple(sigma)
    s_unit = tuple(s * -0.5 for s in sigma)
    t3_unit = exact_commutator(g[4], g[7]) * 0.25j
    return PauliOperatorSet(gb, float(hbar), V, mplus, mminus, m0, sigma, s_unit, t3_unit)


def sigma_explicit(ops: PauliOperatorSet):
    """Sigma written out component by component: -(i/2)[G2,G3], -(i/2)[G3,G1], -(i/2)[G1,G2]."""
    v1, v2, v3 = ops.V
    return (
        exact_commutator(v2, v3) * -0.5j,
        exact_commutator(v3, v1) * -0.5j,
        exact_commutator(v1, v2) * -0.5j,
    )


def spin_explicit_unit(ops: PauliOperatorSet):
    """S / hbar written out as (i/4)[G2,G3], (i/4)[G3,G1], (i/4)[G1,G2]."""
    v1, v2, v3 = ops.V
    return (
        exact_commutator(v2, v3) * 0.25j,
        exact_commutator(v3, v1) * 0.25j,
        exact_commutator(v1, v2) * 0.25j,
    )


def splitting_operator(ops: PauliOperatorSet, k: float, ell0: float) -> np.ndarray:
    """S3 - k^2 ell0^2 T3."""
    return ops.S[2] - (k * k * ell0 * ell0) * ops.T3


def _check(identity_id, anchor, lhs, rhs):
    return Check(identity_id, anchor, exact_deviation(lhs, rhs), lhs == rhs)


def _delta(a, b):
    return 1 if a == b else 0


def mm_anticommutator_rhs(ops, k, l, m, n, symmetrized=True):
    """Right-hand side of {M+_kl, M-_mn}.

    With ``symmetrized`` the Kronecker term is -(d_km d_ln + d_kn d_lm), the
    form that survives contraction with tensors symmetric in m <-> n. The
    unsymmetrized -2 d_km d_ln differs from it at off-diagonal slots.
    """
    n_dim = ops.dim
    eye = ExactMatrix.eye(n_dim)
    if symmetrized:
        kron = -(_delta(k, m) * _delta(l, n) + _delta(k, n) * _delta(l, m))
    else:
        kron = -2 * _delta(k, m) * _delta(l, n)
    yy_kl = _delta(k, Y) * _delta(l, Y)
    yy_mn = _delta(m, Y) * _delta(n, Y)
    rhs = eye * (kron + 4 * yy_kl * yy_mn)
    rhs = rhs + ops.Mminus[m][n] * (2 * yy_kl) - ops.Mplus[k][l] * (2 * yy_mn)
    return rhs


def literal_mm_failures(ops):
    """Slots (1-based) where the unsymmetrized {M+,M-} formula does not hold."""
    bad = []
    for k, l, m, n in product(IDX, IDX, IDX, IDX):
        lhs = exact_anticommutator(ops.Mplus[k][l], ops.Mminus[m][n])
        if lhs != mm_anticommutator_rhs(ops, k, l, m, n, symmetrized=False):
            bad.append(f"{k + 1}{l + 1}{m + 1}{n + 1}")
    return bad


def _iiib_scalar_cancellation(coeff):
    """1/2 ({pi2^2, pi_k pi_l} c_kl + 4 pi2^4) for commuting pi, c_kl = M-_kl - M+_kl."""
    pi = sympy.symbols("pi1 pi2 pi3", commutative=True)
    expr = 4 * pi[Y] ** 4
    for k, l in product(IDX, IDX):
        expr += 2 * pi[Y] ** 2 * pi[k] * pi[l] * coeff[k][l]
    return sympy.expand(sympy.Rational(1, 2) * expr)


def verify_identity_suite(ops: PauliOperatorSet) -> Report:
    checks = []
    eye = ExactMatrix.eye(ops.dim)
    zero = ExactMatrix.zeros(ops.dim)

    # (a)
    for k, l, m in product(IDX, IDX, IDX):
        lhs = ops.Mplus[k][l] @ ops.V[m] + ops.V[m] @ ops.Mminus[k][l]
        checks.append(_check(f"a:M+V+VM-[{k + 1}{l + 1};{m + 1}]", "M+_kl V_m + V_m M-_kl = 0", lhs, zero))

    # (b) and (g)
    gb_report = verify_gblocks(ops.blocks)
    for c in gb_report.checks:
        prefix = "g" if c.identity_id.startswith("G5-central") else "b"
        checks.append(Check(f"{prefix}:{c.identity_id}", c.anchor, c.max_abs_deviation, c.passed))

    # (c) and (d)
    for k, m in product(IDX, IDX):
        anti = exact_anticommutator(ops.V[k], ops.V[m])
        checks.append(_check(f"c:VV+VV[{k + 1}{m + 1}]", "V_k V_m + V_m V_k = -2 delta_km",
                             anti, eye * (-2 * _delta(k, m))))
        rhs = zero
        for l in IDX:
            eps = levi_civita(k, m, l)
            if eps:
                rhs = rhs + ops.Sigma[l] * (2j * eps)
        checks.append(_check(f"d:VV-VV[{k + 1}{m + 1}]", "V_k V_m - V_m V_k = 2i eps_kml Sigma_l",
                             exact_commutator(ops.V[k], ops.V[m]), rhs))

    # (e)
    for k, l, m, n in product(IDX, IDX, IDX, IDX):
        lhs = exact_anticommutator(ops.Mplus[k][l], ops.Mminus[m][n])
        checks.append(_check(
            f"e:{{M+,M-}}[{k + 1}{l + 1}{m + 1}{n + 1}]",
            "{M+_kl, M-_mn} = -2 d_km d_ln + 2(d_k2 d_l2 M-_mn - M+_kl d_m2 d_n2) + 4 d_k2 d_l2 d_m2 d_n2"
            " (symmetrized over m<->n)",
            lhs, mm_anticommutator_rhs(ops, k, l, m, n),
        ))

    # (f)
    coeff = [[None] * 3 for _ in IDX]
    for k, l in product(IDX, IDX):
        diff = ops.Mplus[k][l] - ops.Mminus[k][l]
        rhs = eye * (2 * _delta(k, Y) * _delta(l, Y))
        checks.append(_check(f"f:M+-M-[{k + 1}{l + 1}]", "M+_kl - M-_kl = 2 d_k2 d_l2 I", diff, rhs))
        scalar = (-diff).scalar_multiple_of_identity()
        if scalar is not None and scalar[1] == 0 and scalar[0].imag == 0:
            coeff[k][l] = sympy.Integer(int(scalar[0].real)) if scalar[0].real == int(scalar[0].real) \
                else sympy.nsimplify(scalar[0].real)
    if all(c is not None for row in coeff for c in row):
        residual = _iiib_scalar_cancellation(coeff)
        ok = residual == 0
        dev = 0.0 if ok else float("inf")
    else:
        ok, dev, residual = False, float("inf"), "M- - M+ not scalar"
    checks.append(Check("f:IIIb-scalar", "-2{pi2^2, pi2^2} + 4 pi2^4 = 0 (IIIb vanishes)", dev, ok,
                        note=f"residual polynomial: {residual}"))

    report = Report("identity-suite", checks)
    report.info["e_unsymmetrized_failing_slots"] = literal_mm_failures(ops)
    return report


def verify_spin_algebra(ops: PauliOperatorSet) -> Report:
    """su(2) relations, S^2, spin spectra inputs, and agreement of the two Sigma/S routes."""
    checks = []
    su = ops.S_unit
    zero = ExactMatrix.zeros(ops.dim)
    for j, k in product(IDX, IDX):
        rhs = zero
        for l in IDX:
            eps = levi_civita(j, k, l)
            if eps:
                rhs = rhs + su[l] * (1j * eps)
        checks.append(_check(f"su2[{j + 1}{k + 1}]", "[S_j, S_k] = i hbar eps_jkl S_l",
                             exact_commutator(su[j], su[k]), rhs))
    s2 = su[0] @ su[0] + su[1] @ su[1] + su[2] @ su[2]
    const = s2.scalar_multiple_of_identity()
    checks.append(Check("S^2", "S1^2 + S2^2 + S3^2 = const * I", 0.0 if const else float("inf"),
                        const is not None, note=f"S^2 / hbar^2 = {const[0].real if const else None}"))
    for j, (a, b) in enumerate(zip(ops.Sigma, sigma_explicit(ops))):
        checks.append(_check(f"Sigma-routes[{j + 1}]", "Sigma_j = -(i/2) eps_kmj V_k V_m", a, b))
    for j, (a, b) in enumerate(zip(su, spin_explicit_unit(ops))):
        checks.append(_check(f"S-routes[{j + 1}]", "S = -(hbar/2) Sigma = (i hbar/4) eps [G,G]", a, b))
    for j in IDX:
        checks.append(_check(f"S-hermitian[{j + 1}]", "S_j = S_j^H", su[j], su[j].dagger()))
    report = Report("spin-algebra", checks)
    if const:
        report.info["S2_over_hbar2"] = float(const[0].real)
    return report


@dataclass(frozen=True)
class BracketTensor:
    """entries[k][l][m][n] = M+_kl M-_mn - M-_mn M+_kl (0-based indices)."""

    entries: tuple

    def __getitem__(self, idx):
        k, l, m, n = idx
        return self.entries[k][l][m][n]

    def by_label(self, label: str) -> ExactMatrix:
        k, l, m, n = (int(c) - 1 for c in label)
        return self.entries[k][l][m][n]


def build_bracket_tensor(ops: PauliOperatorSet) -> BracketTensor:
    entries = tuple(
        tuple(
            tuple(
                tuple(exact_commutator(ops.Mplus[k][l], ops.Mminus[m][n])
                      for n in IDX)
                for m in IDX)
            for l in IDX)
        for k in IDX)
    return BracketTensor(entries)


# brackets that drop out of the written-out Theta components because G5 = I
CROSSED_OUT = ("1322", "2213", "2223", "2322", "2233", "3322",
               "1122", "2211", "2122", "2221", "2231", "3122")


def verify_bracket_tensor(bt: BracketTensor) -> Report:
    checks = []
    for k, l, m, n in product(IDX, IDX, IDX, IDX):
        lab = f"{k + 1}{l + 1}{m + 1}{n + 1}"
        e = bt[k, l, m, n]
        checks.append(_check(f"sym-kl[{lab}]", "[klmn] = [lkmn]", e, bt[l, k, m, n]))
        checks.append(_check(f"sym-mn[{lab}]", "[klmn] = [klnm]", e, bt[k, l, n, m]))
        checks.append(_check(f"antisym[{lab}]", "[klmn] = -[mnkl]", e, -bt[m, n, k, l]))
        if (k, l) == (Y, Y) or (m, n) == (Y, Y):
            checks.append(_check(f"yy-zero[{lab}]", "[kl22] = [22mn] = 0 (G5 = I central)",
                                 e, ExactMatrix.zeros(e.shape[0])))
    for lab in CROSSED_OUT:
        e = bt.by_label(lab)
        checks.append(_check(f"crossed-out[{lab}]", "crossed-out Theta terms vanish",
                             e, ExactMatrix.zeros(e.shape[0])))
    return Report("bracket-tensor", checks)


@dataclass(frozen=True)
class ThetaTable:
    """Symmetrized coefficients: Theta_j = sum_km coeff[j][k][m] d_k d_m."""

    coeff: tuple
    raw: tuple  # unsymmetrized (1/sqrt2) eps_lnj [klmn], ordered d_k d_m

    def tcal(self, hbar: float) -> np.ndarray:
        """Coefficients of the T-operator, (i hbar / 4) Theta, shape (3, 3, 3, n, n)."""
        return np.array([[[0.25j * hbar * c.value for c in row] for row in comp] for comp in self.coeff])


def build_theta(ops: PauliOperatorSet, bt: BracketTensor | None = None) -> ThetaTable:
    bt = bt or build_bracket_tensor(ops)
    zero = ExactMatrix.zeros(ops.dim)
    raw = []
    for j in IDX:
        comp = []
        for k in IDX:
            row = []
            for m in IDX:
                acc = zero
                for l, n in product(IDX, IDX):
                    eps = levi_civita(l, n, j)
                    if eps:
                        acc = acc + bt[k, l, m, n] * eps
                row.append(_inv_sqrt2(acc))
            comp.append(tuple(row))
        raw.append(tuple(comp))
    coeff = tuple(
        tuple(tuple((raw[j][k][m] + raw[j][m][k]) * 0.5 for m in IDX) for k in IDX)
        for j in IDX)
    return ThetaTable(coeff, tuple(raw))


def build_v_tensor(ops: PauliOperatorSet, mminus=None):
    """V-tensor kernel of the first-order term: vt[j][l] = eps_mkj V_m M-_kl."""
    mminus = ops.Mminus if mminus is None else mminus
    zero = ExactMatrix.zeros(ops.dim)
    out = []
    for j in IDX:
        row = []
        for l in IDX:
            acc = zero
            for m, k in product(IDX, IDX):
                eps = levi_civita(m, k, j)
                if eps:
                    acc = acc + (ops.V[m] @ mminus[k][l]) * eps
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)
