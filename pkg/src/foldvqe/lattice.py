"""Tetrahedral-lattice geometry: turn sequences, coordinates, contacts.

Beads live on a bipartite diamond lattice; step k (1-based) moves by
(-1)**(k-1) * AXIS[t_k], so the two sublattices alternate along the chain.
All arithmetic is integer; nearest-neighbor (contact) squared distance is 3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Axis vectors of the four tetrahedral directions.
AXIS = np.array(
    [
        [1, 1, 1],
        [1, -1, -1],
        [-1, 1, -1],
        [-1, -1, 1],
    ],
    dtype=np.int64,
)

#: Squared lattice distance of a contact (one axis step).
CONTACT_DIST_SQ = 3

#: Minimum index separation for an interaction pair; below this the lattice
#: girth makes contact impossible.
MIN_CONTACT_SEPARATION = 5


@dataclass(frozen=True)
class TurnSequence:
    """Turns t_1..t_{N_a-1}; the first two are fixed by symmetry to 1, 0 and
    the third has its low bit pinned, leaving t_3 in {1, 3}."""

    turns: tuple[int, ...]

    def __post_init__(self):
        if len(self.turns) < 3:
            raise ValueError("a chain needs at least four beads")
        if any(t not in (0, 1, 2, 3) for t in self.turns):
            raise ValueError("turns must be in 0..3")
        if self.turns[0] != 1 or self.turns[1] != 0:
            raise ValueError("turns must start with the fixed prefix 1, 0")
        if self.turns[2] not in (1, 3):
            raise ValueError("third turn must be 1 or 3")

    @property
    def n_beads(self) -> int:
        return len(self.turns) + 1

    def backtracks(self) -> list[int]:
        """1-based positions k with t_{k+1} == t_k (bead k+2 returns to bead k)."""
        return [
            k + 1
            for k in range(len(self.turns) - 1)
            if self.turns[k] == self.turns[k + 1]
        ]

    def display(self) -> str:
        """Render like the conventional sublattice notation: odd positions
        (1-based) carry an overbar.  Bars are presentational only."""
        out = []
        for k, t in enumerate(self.turns, start=1):
            out.append(f"{t}̄" if k % 2 == 1 else str(t))
        return "[" + ", ".join(out) + "]"


def turns_to_coordinates(seq: TurnSequence) -> np.ndarray:
    """Integer coordinates of all beads, bead 1 at the origin."""
    coords = np.zeros((seq.n_beads, 3), dtype=np.int64)
    sign = 1
    for k, t in enumerate(seq.turns):
        coords[k + 1] = coords[k] + sign * AXIS[t]
        sign = -sign
    return coords


def pair_distance_sq(seq: TurnSequence, i: int, j: int) -> int:
    """Squared distance between beads i < j (1-based) in closed form.

    Equals 4*sum_m n_m**2 - ((j-i) % 2) where n_m counts signed uses of
    axis m along the sub-walk; matches the coordinate route exactly.
    """
    if not (1 <= i < j <= seq.n_beads):
        raise ValueError(f"bead pair ({i}, {j}) out of range")
    n = np.zeros(4, dtype=np.int64)
    sign = 1 if i % 2 == 1 else -1
    for k in range(i, j):
        n[seq.turns[k - 1]] += sign
        sign = -sign
    return int(4 * np.dot(n, n) - ((j - i) % 2))


def eligible_pairs(n_beads: int) -> list[tuple[int, int]]:
    """Bead pairs that can form a contact: separation odd and >= 5, grouped
    by separation then start index."""
    pairs = []
    for sep in range(MIN_CONTACT_SEPARATION, n_beads, 2):
        for i in range(1, n_beads - sep + 1):
            pairs.append((i, i + sep))
    return pairs


def contacts(coords: np.ndarray) -> frozenset[tuple[int, int]]:
    """Eligible bead pairs at nearest-neighbor distance."""
    n_beads = len(coords)
    found = set()
    for i, j in eligible_pairs(n_beads):
        d = coords[j - 1] - coords[i - 1]
        if int(np.dot(d, d)) == CONTACT_DIST_SQ:
            found.add((i, j))
    return frozenset(found)


def overlaps(coords: np.ndarray) -> list[tuple[int, int]]:
    """Bead pairs (1-based, i < j) occupying the same lattice point."""
    seen: dict[tuple[int, int, int], int] = {}
    out = []
    for idx, xyz in enumerate(map(tuple, coords), start=1):
        if xyz in seen:
            out.append((seen[xyz], idx))
        else:
            seen[xyz] = idx
    return out


def decode_bits(z: str, layout) -> tuple[TurnSequence, dict[tuple[int, int], int]]:
    """Split a register bitstring into turns and interaction flags.

    The fixed prefix (t_1=1, t_2=0) and the pinned low bit of t_3 are
    reinserted; remaining conformation bits map pairwise to turns via
    b1 b2 -> 2*b1 + b2.  Flags follow in the layout's pair order.
    """
    if len(z) != layout.n_total:
        raise ValueError(
            f"bitstring length {len(z)} != register size {layout.n_total}"
        )
    if set(z) - {"0", "1"}:
        raise ValueError("bitstring must be over {0, 1}")
    bits = [int(c) for c in z]
    conf, flags = bits[: layout.n_conformation], bits[layout.n_conformation :]
    turns = [1, 0, 2 * conf[0] + 1]
    for k in range(1, len(conf), 2):
        turns.append(2 * conf[k] + conf[k + 1])
    seq = TurnSequence(tuple(turns))
    flag_map = dict(zip(layout.interaction_pairs, flags))
    return seq, flag_map


def encode_bits(seq: TurnSequence, flags: dict[tuple[int, int], int], layout) -> str:
    """Inverse of :func:`decode_bits`: register bitstring for a turn sequence
    plus interaction flags."""
    if seq.n_beads != layout.n_residues:
        raise ValueError("turn sequence length does not match layout")
    bits = [str((seq.turns[2] - 1) // 2)]
    for t in seq.turns[3:]:
        bits.append(str(t >> 1))
        bits.append(str(t & 1))
    for pair in layout.interaction_pairs:
        bits.append(str(int(flags.get(pair, 0))))
    return "".join(bits)


def export_xyz(coords: np.ndarray, sequence: str, comment: str = "") -> str:
    """Standard XYZ text, residue one-letter codes as element labels."""
    if len(coords) != len(sequence):
        raise ValueError("coordinate count must match sequence length")
    lines = [str(len(coords)), comment]
    for code, (x, y, z) in zip(sequence, coords):
        lines.append(f"{code} {x:.1f} {y:.1f} {z:.1f}")
    return "\n".join(lines) + "\n"
