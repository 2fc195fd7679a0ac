"""Exhaustive classical ground truth: walk enumeration and full-register scan.

Two independent routes to the minimum: ``fold_oracle`` works in integer
lattice geometry over self-avoiding turn assignments, ``bitstring_oracle``
scans every register state against the encoded Hamiltonian.  They must
agree; tests enforce it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .encoding import PACKING_ANCHOR, IsingHamiltonian, ProteinInstance, _packing_windows
from .lattice import (
    CONTACT_DIST_SQ,
    TurnSequence,
    eligible_pairs,
    pair_distance_sq,
)

#: Walk enumeration guard: 2 * 4**(N_a - 4) free assignments.
FOLD_ORACLE_MAX_RESIDUES = 10

#: Degenerate levels are merged within this tolerance.
LEVEL_TOL = 1e-9


def enumerate_walks(n_residues: int, skip_backtracking: bool = True):
    """All turn sequences with the fixed prefix; optionally only walks
    without immediate backtracking."""
    n_turns = n_residues - 1
    for t3 in (1, 3):
        free_slots = n_turns - 3
        for rest in itertools.product(range(4), repeat=free_slots):
            turns = (1, 0, t3) + rest
            if skip_backtracking and any(
                turns[k] == turns[k + 1] for k in range(n_turns - 1)
            ):
                continue
            yield TurnSequence(turns)


def contact_bracket(instance: ProteinInstance, seq: TurnSequence, i: int, j: int) -> float:
    """Energy contribution of claiming contact (i, j) on this walk; mirrors
    the gated bracket of the encoded Hamiltonian, evaluated geometrically."""
    d2 = pair_distance_sq(seq, i, j)
    value = instance.pair_energy(i, j)
    value += instance.lambda_in * (d2 - CONTACT_DIST_SQ) / 4.0
    if instance.packing_scale > 0.0:
        for a, b in _packing_windows(i, j, instance.n_residues):
            value += (
                instance.packing_scale
                * (PACKING_ANCHOR - pair_distance_sq(seq, a, b))
                / PACKING_ANCHOR
            )
    return value


def walk_energy(
    instance: ProteinInstance, seq: TurnSequence
) -> tuple[float, dict[tuple[int, int], int]]:
    """Best achievable energy of a walk and the interaction flags achieving
    it (claim a contact exactly when its bracket is negative)."""
    energy = instance.lambda_gc * len(seq.backtracks())
    flags = {}
    for i, j in eligible_pairs(instance.n_residues):
        bracket = contact_bracket(instance, seq, i, j)
        if bracket < 0.0:
            energy += bracket
            flags[(i, j)] = 1
        else:
            flags[(i, j)] = 0
    return energy, flags


@dataclass(frozen=True)
class FoldOracleResult:
    min_energy: float
    minimizers: tuple[TurnSequence, ...]


def fold_oracle(instance: ProteinInstance) -> FoldOracleResult:
    """Exhaustive minimum over non-backtracking walks."""
    if instance.n_residues > FOLD_ORACLE_MAX_RESIDUES:
        raise ValueError(
            f"fold oracle guard: {instance.n_residues} residues > "
            f"{FOLD_ORACLE_MAX_RESIDUES}"
        )
    best = np.inf
    argmin: list[TurnSequence] = []
    for seq in enumerate_walks(instance.n_residues):
        energy, _ = walk_energy(instance, seq)
        if energy < best - LEVEL_TOL:
            best = energy
            argmin = [seq]
        elif abs(energy - best) <= LEVEL_TOL:
            argmin.append(seq)
    return FoldOracleResult(float(best), tuple(argmin))


def bitstring_oracle(h: IsingHamiltonian) -> tuple[float, list[str]]:
    """Minimum energy over every register state and all attaining bitstrings."""
    table = h.energy_table()
    best = float(table.min())
    hits = np.flatnonzero(table <= best + LEVEL_TOL)
    width = h.n_qubits
    return best, [format(int(z), f"0{width}b") for z in hits]


def ground_bitstrings(h: IsingHamiltonian) -> set[str]:
    return set(bitstring_oracle(h)[1])


@dataclass(frozen=True)
class SpectrumLevel:
    energy: float
    bitstrings: tuple[str, ...]

    @property
    def degeneracy(self) -> int:
        return len(self.bitstrings)


def spectrum(h: IsingHamiltonian, k: int) -> list[SpectrumLevel]:
    """Lowest k distinct energy levels with their degenerate bitstrings."""
    table = h.energy_table()
    order = np.argsort(table, kind="stable")
    width = h.n_qubits
    levels: list[SpectrumLevel] = []
    current: list[str] = []
    current_energy = None
    for z in order:
        energy = float(table[z])
        if current_energy is None or abs(energy - current_energy) > LEVEL_TOL:
            if current:
                levels.append(SpectrumLevel(current_energy, tuple(current)))
                if len(levels) == k:
                    return levels
            current_energy = energy
            current = []
        current.append(format(int(z), f"0{width}b"))
    if current and len(levels) < k:
        levels.append(SpectrumLevel(current_energy, tuple(current)))
    return levels
