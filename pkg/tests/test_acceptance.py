"""The twelve acceptance criteria, each at its stated tolerance.

Run under pytest, or directly with ``python3 tests/test_acceptance.py`` to get
one pass/fail line per criterion.
"""

import math
import os
import sys
import tempfile
import time
from itertools import product

import numpy as np
import pytest

from ell0dirac.cli import main as cli_main
from ell0dirac.clifford import build_paper_gammas, build_weyl_brauer, extract_blocks, verify_clifford
from ell0dirac.linalg import SQRT2, hermitian_eig, identity
from ell0dirac.pauli import build_operator_set, splitting_operator, verify_identity_suite
from ell0dirac.sterngerlach import FieldModel, force_spectrum, simulate_beam, verify_theta_reduction
from ell0dirac.symbols import (
    PhysicalParams,
    WaveVector,
    dispersion_omega,
    dispersion_sweep,
    hamiltonian_symbol,
    transverse_null_dim,
    verify_bopp_factorization,
    verify_factorization,
)

SEED = 2024


def _ops():
    return build_operator_set(extract_blocks(build_paper_gammas()), 1.0)


def criterion_1():
    t0 = time.perf_counter()
    rep = verify_clifford(build_paper_gammas())
    dt = time.perf_counter() - t0
    ok = rep.passed and rep.counts() == (55, 55) and rep.max_deviation == 0.0 and dt < 0.1
    return ok, f"{rep.counts()[0]}/55 pairs exact, max dev {rep.max_deviation:g}, {dt * 1e3:.1f} ms"


def criterion_2():
    basis = build_paper_gammas()
    t0 = time.perf_counter()
    rep = verify_factorization(PhysicalParams(), 1000, SEED, basis)
    dt = time.perf_counter() - t0
    ok = rep.passed and rep.counts() == (1000, 1000) and dt < 1.0
    return ok, f"{rep.counts()[0]}/1000 samples, max ||D^2 - P I|| {rep.max_deviation:.2e}, {dt:.3f} s"


def criterion_3():
    basis = build_paper_gammas()
    h = 16
    eye = identity(h)
    gamma0_ok = np.array_equal(basis[0], np.block([[eye, 0 * eye], [0 * eye, -eye]]))
    gb = extract_blocks(basis)  # raises on any pattern violation, including Gamma0 Gamma_k
    g5_ok = np.array_equal(gb[5], eye)
    p = basis[0] @ basis[5]
    pattern_ok = (np.array_equal(p[:h, h:], gb[5]) and np.array_equal(p[h:, :h], -gb[5])
                  and not p[:h, :h].any() and not p[h:, h:].any())
    ok = gamma0_ok and g5_ok and pattern_ok
    return ok, f"Gamma0 diag {gamma0_ok}, G5 = I {g5_ok}, Gamma0 Gamma5 pattern {pattern_ok}"


def criterion_4():
    ops = _ops()
    rep = verify_identity_suite(ops)
    n_a = sum(1 for c in rep.checks if c.identity_id.startswith("a:") and c.passed)
    bt = ops.brackets
    yy = all(bt[k, l, 1, 1].is_zero() for k, l in product(range(3), range(3)))
    ok = rep.passed and rep.max_deviation == 0.0 and n_a == 27 and yy
    ok_n, total = rep.counts()
    return ok, f"{ok_n}/{total} identities exact, (a) {n_a}/27, [kl22] = 0: {yy}"


def criterion_5():
    ops = _ops()
    rng = np.random.default_rng(SEED)
    worst, mults_ok = 0.0, True
    for _ in range(20):
        while True:
            k, ell0 = rng.uniform(0.1, 1.5, 2)
            x = (k * ell0) ** 2
            if abs(x - 1) > 1e-3:
                break
        rep = hermitian_eig(splitting_operator(ops, k, ell0))
        want = sorted([0.5 * (1 + x), 0.5 * (1 - x), -0.5 * (1 + x), -0.5 * (1 - x)])
        mults_ok &= rep.multiplicities == [4, 4, 4, 4]
        if len(rep.values) == 4:
            worst = max(worst, float(np.max(np.abs(np.array(rep.values) - want))))
        worst = max(worst, float(np.max(np.abs(rep.eigenvalues - np.repeat(want, 4)))))
    ok = mults_ok and worst <= 1e-10
    return ok, f"20 draws, max |lambda - closed form| {worst:.2e}, multiplicities 4 each: {mults_ok}"


def criterion_6():
    ops = _ops()
    rng = np.random.default_rng(SEED + 6)
    worst, mults_ok = 0.0, True
    b1, m = 1.3, 0.8
    ref = None
    mean_dev = 0.0
    for _ in range(10):
        ell0 = rng.uniform(0.05, 0.9)
        b3 = rng.uniform(0.1, 2.0) * rng.choice([-1, 1])
        p = PhysicalParams(m=m, ell0=ell0)
        f = FieldModel(1.0, b1, b3)
        base = p.mu * b1 * p.hbar / 2
        r = SQRT2 * ell0**2 / f.d**2
        want = sorted([base * (1 + r), base * (1 - r), -base * (1 + r), -base * (1 - r)])
        rep = force_spectrum(p, ops, f)
        mults_ok &= rep.multiplicities == [4, 4, 4, 4]
        worst = max(worst, float(np.max(np.abs(rep.eigenvalues - np.repeat(want, 4)))))
        # pair lines by label: for sqrt2 ell0^2/d^2 > 1 the "+-" line sits below zero
        beam = simulate_beam(p, ops, f, "unpolarized", 1.0, 1, SEED)
        mean_plus, mean_minus = beam.mean_plus, beam.mean_minus
        if ref is None:
            ref = base
        mean_dev = max(mean_dev, abs(mean_plus - ref) / abs(ref), abs(mean_minus + ref) / abs(ref))
    ok = mults_ok and worst <= 1e-10 and mean_dev <= 1e-12
    return ok, (f"10 draws, max |lambda - closed form| {worst:.2e}, multiplicities 4 each: {mults_ok}, "
                f"pair means rel dev {mean_dev:.1e}")


def criterion_7():
    ops = _ops()
    rng = np.random.default_rng(SEED + 7)
    p = PhysicalParams(ell0=0.7, q=1.3)
    f = FieldModel(0.9, 1.1, -0.8)
    pts = [tuple(x) for x in rng.uniform(-2, 2, (20, 3))]
    rep = verify_theta_reduction(p, ops, f, pts)
    return rep.passed and rep.counts() == (20, 20), f"{rep.counts()[0]}/20 points, max dev {rep.max_deviation:.2e}"


def criterion_8():
    p = PhysicalParams(ell0=0.8, c=1.0)
    rows = dispersion_sweep(p, 0.0, 5.0, 100)
    rel = 0.0
    for k, w, _ in rows:
        exact = p.c * k * math.sqrt(1 + p.ell0**2 * k * k)
        rel = max(rel, abs(w - exact) / exact if exact else abs(w))
    rng = np.random.default_rng(SEED + 8)
    on_ok = off_ok = True
    for _ in range(20):
        k = tuple(rng.uniform(-2, 2, 3))
        w0 = dispersion_omega(p, math.sqrt(sum(x * x for x in k)))
        on_ok &= transverse_null_dim(p, WaveVector(k, w0)) >= 1
        off_ok &= transverse_null_dim(p, WaveVector(k, 1.3 * w0)) == 0
    ok = rel <= 1e-14 and on_ok and off_ok
    return ok, f"100 points max rel dev {rel:.1e}; null mode on-shell {on_ok}, absent off-shell {off_ok}"


def criterion_9():
    t0 = time.perf_counter()
    basis = build_weyl_brauer(7)
    cl = verify_clifford(basis)
    rep = verify_bopp_factorization(PhysicalParams(kappa0=1.0), 50, SEED, basis)
    dt = time.perf_counter() - t0
    ok = cl.passed and cl.max_deviation == 0.0 and rep.passed and rep.counts() == (50, 50) and dt < 5.0
    return ok, f"14 generators exact {cl.passed}, {rep.counts()[0]}/50 samples, max dev {rep.max_deviation:.2e}, {dt:.2f} s"


def criterion_10():
    hbar = 1.0
    ops = _ops()
    ok, worst = True, 0.0
    for s in ops.S:
        rep = hermitian_eig(s)
        ok &= rep.multiplicities == [8, 8]
        ok &= np.allclose(rep.values, [-hbar / 2, hbar / 2], rtol=0, atol=1e-12)
        worst = max(worst, rep.max_residual)
    ok &= worst <= 1e-10
    return ok, f"S1..S3 each +-hbar/2 x8: {ok}, max residual {worst:.1e}"


def criterion_11():
    basis = build_paper_gammas()
    ok = True
    for m, c in [(1.0, 1.0), (0.5, 3.0)]:
        p = PhysicalParams(m=m, c=c, unit_system="si-like")
        rep = hermitian_eig(hamiltonian_symbol(p, (0, 0, 0), basis))
        mc2 = m * c * c
        ok &= rep.multiplicities == [16, 16] and np.allclose(rep.values, [-mc2, mc2], rtol=1e-14)
    return ok, f"k=0 eigenvalues +-mc^2 x16: {ok}"


def criterion_12():
    with tempfile.TemporaryDirectory() as d:
        a, b = os.path.join(d, "a.json"), os.path.join(d, "b.json")
        codes = [cli_main(["verify", "--seed", "7", "--samples", "200", "--out", path]) for path in (a, b)]
        with open(a, "rb") as fa, open(b, "rb") as fb:
            same = fa.read() == fb.read()
    ok = same and codes == [0, 0]
    return ok, f"exit codes {codes}, byte-identical: {same}"


CRITERIA = [
    (1, "Clifford relations", criterion_1),
    (2, "Factorization", criterion_2),
    (3, "Block structure", criterion_3),
    (4, "Identity suite", criterion_4),
    (5, "Splitting spectrum", criterion_5),
    (6, "Stern-Gerlach spectrum", criterion_6),
    (7, "IIIc dual-route oracle", criterion_7),
    (8, "Dispersion and Maxwell null mode", criterion_8),
    (9, "Bopp factorization", criterion_9),
    (10, "Spin eigenvalues", criterion_10),
    (11, "Rest-frame degeneracy", criterion_11),
    (12, "Determinism", criterion_12),
]


def format_line(num, name, ok, detail):
    return f"criterion {num:2d} {name:<34} {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("num,name,fn", CRITERIA, ids=[f"c{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(num, name, fn, acceptance_lines, capsys):
    ok, detail = fn()
    line = format_line(num, name, ok, detail)
    acceptance_lines.append((num, line))
    with capsys.disabled():
        print("\n" + line, end="")
    assert ok, line


if __name__ == "__main__":
    results = []
    for num, name, fn in CRITERIA:
        ok, detail = fn()
        results.append(ok)
        print(format_line(num, name, ok, detail))
    sys.exit(0 if all(results) else 1)
