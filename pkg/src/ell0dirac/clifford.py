"""Clifford generators: the ten 32x32 gamma matrices, Brauer-Weyl family, G blocks."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .linalg import DimensionError, anticommutator, dagger, identity, kron_chain, pauli
from .verification import Check, Report

I2, SIGMA1, SIGMA2, SIGMA3 = pauli()


class StructureError(ValueError):
    """A generator does not have the expected 2x2 block pattern."""


@dataclass(frozen=True)
class CliffordBasis:
    generators: tuple
    dim: int
    labels: tuple

    def __post_init__(self):
        for g, label in zip(self.generators, self.labels):
            if g.shape != (self.dim, self.dim):
                raise DimensionError(f"{label} has shape {g.shape}, expected {self.dim}x{self.dim}")

    def __len__(self):
        return len(self.generators)

    def __getitem__(self, i):
        return self.generators[i]

    def replace(self, index, matrix):
        gens = list(self.generators)
        gens[index] = np.asarray(matrix, dtype=np.complex128)
        return CliffordBasis(tuple(gens), self.dim, self.labels)


def _basis(gens):
    gens = tuple(np.ascontiguousarray(g) for g in gens)
    return CliffordBasis(gens, gens[0].shape[0], tuple(f"Gamma{i}" for i in range(len(gens))))


def _string(n, slot, sigma):
    """sigma2 x ... x sigma2 x sigma x I2 x ... x I2 with ``sigma`` at ``slot``."""
    return kron_chain(*([SIGMA2] * slot + [sigma] + [I2] * (n - slot - 1)))


def build_weyl_brauer(n: int) -> CliffordBasis:
    """2n anticommuting Hermitian generators of dimension 2**n.

    Generator 2j carries sigma3 in Kronecker slot j, generator 2j+1 carries
    sigma1; both have sigma2 in the slots before j and I2 after.
    """
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= 7:
        raise ValueError(f"n must be an integer in 1..7, got {n!r}")
    gens = []
    for j in range(n):
        gens.append(_string(n, j, SIGMA3))
        gens.append(_string(n, j, SIGMA1))
    return _basis(gens)


def build_paper_gammas() -> CliffordBasis:
    """The ten 32x32 matrices Gamma0..Gamma9.

    Gamma0..Gamma4 carry sigma3 in slots 0..4 and Gamma5..Gamma9 carry sigma1
    in slots 0..4, each preceded by sigma2 factors. This is the n=5
    Brauer-Weyl family reordered so that Gamma0 = diag(I16, -I16).
    """
    gens = [_string(5, j, SIGMA3) for j in range(5)]
    gens += [_string(5, j, SIGMA1) for j in range(5)]
    return _basis(gens)


def verify_clifford(basis: CliffordBasis) -> Report:
    """Check {Gamma_i, Gamma_j} = 2 delta_ij I over all unordered pairs i <= j.

    Equality is exact: the generators have entries in {0, +-1, +-i}.
    """
    n = len(basis)
    eye = identity(basis.dim)
    checks = []
    violated = []
    for i in range(n):
        for j in range(i, n):
            target = 2 * eye if i == j else 0 * eye
            dev = float(np.max(np.abs(anticommutator(basis[i], basis[j]) - target)))
            checks.append(
                Check(
                    f"anticomm({i},{j})",
                    "{Gamma_i, Gamma_j} = 2 delta_ij I",
                    dev,
                    dev == 0.0,
                )
            )
            if dev != 0.0:
                violated.append((i, j))
    return Report("clifford", checks, {"generators": n, "dim": basis.dim, "violated_pairs": violated})


def hermiticity(basis: CliffordBasis):
    """Label each generator 'hermitian', 'anti-hermitian' or 'neither'."""
    out = []
    for g in basis.generators:
        if np.array_equal(g, dagger(g)):
            out.append("hermitian")
        elif np.array_equal(g, -dagger(g)):
            out.append("anti-hermitian")
        else:
            out.append("neither")
    return out


@dataclass(frozen=True)
class GBlocks:
    """The 16x16 blocks G1..G9 read off the upper-right corner of Gamma1..Gamma9."""

    g: tuple  # g[0] is None so that g[k] is G_k
    dim: int = 16

    def __getitem__(self, k):
        if not 1 <= k <= 9:
            raise IndexError(f"G blocks are indexed 1..9, got {k}")
        return self.g[k]


def extract_blocks(basis: CliffordBasis) -> GBlocks:
    if len(basis) != 10 or basis.dim != 32:
        raise DimensionError("extract_blocks needs the ten-generator, dimension-32 basis")
    h = 16
    eye, zero = identity(h), np.zeros((h, h), dtype=np.complex128)
    g0 = basis[0]
    if not (np.array_equal(g0[:h, :h], eye) and np.array_equal(g0[h:, h:], -eye)
            and not g0[:h, h:].any() and not g0[h:, :h].any()):
        raise StructureError(f"{basis.labels[0]} is not diag(I16, -I16)")

    blocks = [None]
    for k in range(1, 10):
        gam = basis[k]
        label = basis.labels[k]
        upper, lower = gam[:h, h:], gam[h:, :h]
        if gam[:h, :h].any() or gam[h:, h:].any():
            raise StructureError(f"{label} has nonzero diagonal blocks")
        expected_lower = upper if k == 5 else -upper
        if not np.array_equal(lower, expected_lower):
            sign = "+" if k == 5 else "-"
            raise StructureError(f"{label}: lower-left block is not {sign}G{k}")
        # Gamma0 Gamma_k flips the sign of the bottom half
        prod = g0 @ gam
        want_lower = -upper if k == 5 else upper
        if not (np.array_equal(prod[:h, h:], upper) and np.array_equal(prod[h:, :h], want_lower)
                and np.array_equal(prod[:h, :h], zero) and np.array_equal(prod[h:, h:], zero)):
            raise StructureError(f"Gamma0 {label} does not have the expected block pattern")
        blocks.append(np.ascontiguousarray(upper))

    if not np.array_equal(blocks[5], eye):
        raise StructureError("G5 is not the 16x16 identity")
    return GBlocks(tuple(blocks))


def verify_gblocks(gb: GBlocks) -> Report:
    """G-block anticommutators and centrality of G5, both exact."""
    eye = identity(gb.dim)
    checks = []
    for j in range(1, 10):
        for k in range(j, 10):
            rhs = -2 * eye * (j == k) + 2 * ((j == 5) * gb[k] + (k == 5) * gb[j])
            dev = float(np.max(np.abs(anticommutator(gb[j], gb[k]) - rhs)))
            checks.append(Check(
                f"G-anticomm({j},{k})",
                "{G_j, G_k} = -2 delta_jk + 2 (delta_j5 G_k + G_j delta_k5)",
                dev, dev == 0.0,
            ))
    for k in range(1, 10):
        dev = float(np.max(np.abs(gb[5] @ gb[k] - gb[k] @ gb[5])))
        checks.append(Check(f"G5-central({k})", "[G_5, G_k] = 0", dev, dev == 0.0))
    return Report("gblocks", checks)


def generator_to_csv(matrix) -> str:
    """One CSV row per matrix row; each entry written as a ``re,im`` pair."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(matrix):
        cells = []
        for z in row:
            cells += [f"{z.real:.17g}", f"{z.imag:.17g}"]
        writer.writerow(cells)
    return buf.getvalue()


def generator_from_csv(text: str) -> np.ndarray:
    rows = []
    for cells in csv.reader(io.StringIO(text)):
        if not cells:
            continue
        vals = [float(c) for c in cells]
        rows.append([complex(vals[i], vals[i + 1]) for i in range(0, len(vals), 2)])
    return np.array(rows, dtype=np.complex128)
