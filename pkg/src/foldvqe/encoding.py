"""Turn-encoded folding Hamiltonian on the tetrahedral lattice.

A residue chain of length N_a uses 2*N_a - 7 conformation qubits (two bits
per free turn, with t_1, t_2 and the low bit of t_3 pinned by symmetry)
plus one interaction qubit per eligible contact pair.  The energy is built
as a pseudo-Boolean polynomial over bits q in {0, 1} and converted to a
diagonal Ising operator via q = (1 - Z) / 2; bit value 0 corresponds to
Z eigenvalue +1.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .interactions import InteractionModel, builtin_model, load_interaction_table
from .lattice import CONTACT_DIST_SQ, eligible_pairs
from .pauli import OperatorSum

#: Maximum monomial degree the encoding may produce (one interaction qubit
#: times a degree-4 distance term).
MAX_DEGREE = 5

#: Squared distance at which the contact-conditioned packing penalty
#: vanishes.  When (i, j) is a true contact, its chain neighbors sit at
#: squared distance 0, 4, 8 or 12 from the opposite bead, so anchoring the
#: penalty at 12 makes it non-negative for every genuine contact: overlaps
#: cost the most, maximally spread neighbors cost nothing.
PACKING_ANCHOR = 12.0

#: Packing penalty scale as a fraction of the instance's contact-energy
#: scale.  Large enough to break unphysical near-degeneracies caused by
#: contact-induced overlaps, small enough never to overrule a favorable
#: contact energy.
PACKING_FRACTION = 0.28

Monomial = tuple[int, ...]


class BinaryPolynomial:
    """Multilinear polynomial over binary variables, keyed by sorted index
    tuples; the empty tuple is the constant offset."""

    __slots__ = ("monomials",)

    def __init__(self, monomials: dict[Monomial, float] | None = None):
        self.monomials: dict[Monomial, float] = dict(monomials or {})

    @staticmethod
    def constant(value: float) -> "BinaryPolynomial":
        return BinaryPolynomial({(): value} if value else {})

    @staticmethod
    def variable(index: int) -> "BinaryPolynomial":
        return BinaryPolynomial({(index,): 1.0})

    def copy(self) -> "BinaryPolynomial":
        return BinaryPolynomial(self.monomials)

    def add_monomial(self, indices, coefficient: float) -> None:
        key = tuple(sorted(set(indices)))
        value = self.monomials.get(key, 0.0) + coefficient
        if value == 0.0:
            self.monomials.pop(key, None)
        else:
            self.monomials[key] = value

    def __add__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        out = self.copy()
        for key, value in other.monomials.items():
            out.add_monomial(key, value)
        return out

    def __sub__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        return self + other.scaled(-1.0)

    def __mul__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        out = BinaryPolynomial()
        for ka, va in self.monomials.items():
            for kb, vb in other.monomials.items():
                out.add_monomial(set(ka) | set(kb), va * vb)
        return out

    def scaled(self, factor: float) -> "BinaryPolynomial":
        if factor == 0.0:
            return BinaryPolynomial()
        return BinaryPolynomial({k: v * factor for k, v in self.monomials.items()})

    def degree(self) -> int:
        return max((len(k) for k in self.monomials), default=0)

    def evaluate(self, bits) -> float:
        total = 0.0
        for key, value in self.monomials.items():
            if all(bits[i] for i in key):
                total += value
        return total

    def __repr__(self) -> str:
        parts = [
            f"{v:+g}*q{list(k)}" if k else f"{v:+g}"
            for k, v in sorted(self.monomials.items())
        ]
        return " ".join(parts) or "0"


@dataclass(frozen=True)
class QubitLayout:
    """Register layout: conformation bits first (turn bits in chain order),
    then one interaction bit per eligible pair, grouped by separation."""

    n_residues: int
    n_conformation: int
    interaction_pairs: tuple[tuple[int, int], ...]

    @property
    def n_total(self) -> int:
        return self.n_conformation + len(self.interaction_pairs)

    def interaction_bit(self, pair: tuple[int, int]) -> int:
        return self.n_conformation + self.interaction_pairs.index(pair)


def qubit_layout(n_residues: int) -> QubitLayout:
    if n_residues < 4:
        raise ValueError("need at least 4 residues; shorter chains have no free turns")
    return QubitLayout(
        n_residues=n_residues,
        n_conformation=2 * n_residues - 7,
        interaction_pairs=tuple(eligible_pairs(n_residues)),
    )


@dataclass(frozen=True)
class ProteinInstance:
    """Problem definition: sequence, interaction model, penalty multipliers.

    ``lambda_gc`` scales the growth constraint (no immediate backtracking);
    ``lambda_in`` scales the contact-distance and packing penalties tied to
    the interaction qubits.  Defaults are 10x and 8x the largest relevant
    contact energy so constraint violations dominate the interaction scale;
    the 5:4 ratio keeps the two penalty families from cancelling each
    other's two-local couplings.
    """

    sequence: str
    interactions: InteractionModel
    lambda_gc: float = 0.0
    lambda_in: float = 0.0

    def __post_init__(self):
        if len(self.sequence) < 4:
            raise ValueError("sequence must have at least 4 residues")
        for code in self.sequence:
            if not self.interactions.has_residue(code):
                raise ValueError(f"residue {code!r} missing from interaction model")
        layout = qubit_layout(len(self.sequence))
        for i, j in layout.interaction_pairs:
            self.interactions.pair_energy(self.sequence[i - 1], self.sequence[j - 1])
        scale = self.max_abs_pair_energy() or 1.0
        if self.lambda_gc <= 0.0:
            object.__setattr__(self, "lambda_gc", 10.0 * scale)
        if self.lambda_in <= 0.0:
            object.__setattr__(self, "lambda_in", 8.0 * scale)

    @property
    def n_residues(self) -> int:
        return len(self.sequence)

    @property
    def packing_scale(self) -> float:
        return PACKING_FRACTION * self.max_abs_pair_energy()

    def layout(self) -> QubitLayout:
        return qubit_layout(self.n_residues)

    def pair_energy(self, i: int, j: int) -> float:
        """Contact energy of beads i, j (1-based) under this sequence."""
        return self.interactions.pair_energy(self.sequence[i - 1], self.sequence[j - 1])

    def max_abs_pair_energy(self) -> float:
        layout = qubit_layout(self.n_residues)
        return max(
            (abs(self.pair_energy(i, j)) for i, j in layout.interaction_pairs),
            default=0.0,
        )


def load_protein_spec(path) -> ProteinInstance:
    """Read a protein spec JSON: sequence, interaction source, multipliers."""
    with open(path) as fh:
        obj = json.load(fh)
    source = obj.get("interactions", "builtin:toy_hp")
    if isinstance(source, str) and source.startswith("builtin:"):
        model = builtin_model(source.split(":", 1)[1])
    else:
        model = load_interaction_table(source)
    return ProteinInstance(
        sequence=obj["sequence"],
        interactions=model,
        lambda_gc=float(obj.get("lambda_gc", 0.0)),
        lambda_in=float(obj.get("lambda_in", 0.0)),
    )


# -- turn-bit indicator polynomials ------------------------------------------


def _turn_bit_indices(k: int) -> tuple[int | None, int | None]:
    """Register bit indices (high, low) for turn k (1-based); None = fixed."""
    if k in (1, 2):
        return None, None
    if k == 3:
        return 0, None
    return 2 * k - 7, 2 * k - 6


def turn_axis_indicators(k: int) -> list[BinaryPolynomial]:
    """g_m(t_k) for m = 0..3 as polynomials over register bits, with the
    fixed turns and the pinned low bit of t_3 substituted as constants."""
    one = BinaryPolynomial.constant(1.0)
    if k == 1:  # fixed t_1 = 1
        return [BinaryPolynomial(), one, BinaryPolynomial(), BinaryPolynomial()]
    if k == 2:  # fixed t_2 = 0
        return [one, BinaryPolynomial(), BinaryPolynomial(), BinaryPolynomial()]
    hi, lo = _turn_bit_indices(k)
    b1 = BinaryPolynomial.variable(hi)
    not_b1 = one - b1
    if lo is None:  # t_3: low bit pinned to 1
        return [BinaryPolynomial(), not_b1, BinaryPolynomial(), b1]
    b2 = BinaryPolynomial.variable(lo)
    not_b2 = one - b2
    return [not_b1 * not_b2, not_b1 * b2, b1 * not_b2, b1 * b2]


def distance_sq_polynomial(i: int, j: int, n_residues: int) -> BinaryPolynomial:
    """Squared distance between beads i < j as a polynomial in turn bits:
    4 * sum_m n_m^2 - ((j - i) % 2), n_m the signed axis-m usage count."""
    if not (1 <= i < j <= n_residues):
        raise ValueError(f"bead pair ({i}, {j}) out of range")
    n_axis = [BinaryPolynomial() for _ in range(4)]
    for k in range(i, j):
        sign = 1.0 if k % 2 == 1 else -1.0
        for m, g in enumerate(turn_axis_indicators(k)):
            n_axis[m] = n_axis[m] + g.scaled(sign)
    total = BinaryPolynomial.constant(-float((j - i) % 2))
    for n_m in n_axis:
        total = total + (n_m * n_m).scaled(4.0)
    return total


# -- Hamiltonian assembly -----------------------------------------------------


def growth_constraint(instance: ProteinInstance) -> BinaryPolynomial:
    """Penalty for consecutive identical turns (immediate backtracking)."""
    out = BinaryPolynomial()
    n_turns = instance.n_residues - 1
    for k in range(1, n_turns):
        g_k = turn_axis_indicators(k)
        g_next = turn_axis_indicators(k + 1)
        for m in range(4):
            out = out + (g_k[m] * g_next[m]).scaled(instance.lambda_gc)
    return out


def chirality_constraint(instance: ProteinInstance) -> BinaryPolynomial:
    """Side-chain chirality term; identically zero for main-chain models."""
    return BinaryPolynomial()


def _packing_windows(i: int, j: int, n_residues: int) -> list[tuple[int, int]]:
    """Even-separation bead pairs adjacent to a contact pair (i, j); a claimed
    contact must not drag these onto the same site."""
    windows = []
    if i - 1 >= 1:
        windows.append((i - 1, j))
    windows.append((i + 1, j))
    windows.append((i, j - 1))
    if j + 1 <= n_residues:
        windows.append((i, j + 1))
    return windows


def interaction_term(
    instance: ProteinInstance, include_packing: bool = True
) -> BinaryPolynomial:
    """Contact rewards gated by interaction qubits.

    Each eligible pair (i, j) contributes q_ij * bracket with
    bracket = e_ij + lambda_in * (d2(i, j) - 3) / 4 plus, when packing
    penalties are on, packing_scale * (PACKING_ANCHOR - d2(nbr)) / PACKING_ANCHOR
    for each chain neighbor of the pair.  At a genuine contact the distance
    part vanishes and the packing part penalizes neighbor-site collisions
    induced by the contact, most strongly at an outright overlap.
    """
    layout = instance.layout()
    out = BinaryPolynomial()
    n = instance.n_residues
    for pair_index, (i, j) in enumerate(layout.interaction_pairs):
        bracket = BinaryPolynomial.constant(instance.pair_energy(i, j))
        d2 = distance_sq_polynomial(i, j, n)
        bracket = bracket + (
            d2 - BinaryPolynomial.constant(float(CONTACT_DIST_SQ))
        ).scaled(instance.lambda_in / 4.0)
        if include_packing and instance.packing_scale > 0.0:
            for a, b in _packing_windows(i, j, n):
                nbr = BinaryPolynomial.constant(PACKING_ANCHOR) - distance_sq_polynomial(
                    a, b, n
                )
                bracket = bracket + nbr.scaled(instance.packing_scale / PACKING_ANCHOR)
        gate = BinaryPolynomial.variable(layout.n_conformation + pair_index)
        out = out + gate * bracket
    return out


def build_polynomial(
    instance: ProteinInstance, include_packing: bool = True
) -> BinaryPolynomial:
    """Full folding energy H_gc + H_ch + H_in as a binary polynomial."""
    return (
        growth_constraint(instance)
        + chirality_constraint(instance)
        + interaction_term(instance, include_packing)
    )


# -- Ising conversion ---------------------------------------------------------


@dataclass(frozen=True)
class IsingHamiltonian:
    """Diagonal operator (Z strings only, locality <= 5) plus scalar offset."""

    operator: OperatorSum
    offset: float
    n_qubits: int
    layout: QubitLayout = field(compare=False)

    def energy_of_bitstring(self, z: str) -> float:
        if len(z) != self.n_qubits:
            raise ValueError(f"bitstring length {len(z)} != {self.n_qubits}")
        signs = [1.0 if c == "0" else -1.0 for c in z]
        total = self.offset
        for sig, coeff in self.operator.terms.items():
            prod = coeff.real
            for q, _ in sig:
                prod *= signs[q]
            total += prod
        return total

    def energy_table(self) -> np.ndarray:
        """Energies of all 2**n basis states (qubit 0 = most significant)."""
        dim = 1 << self.n_qubits
        idx = np.arange(dim)
        sign = np.empty((self.n_qubits, dim), dtype=np.float64)
        for q in range(self.n_qubits):
            bit = (idx >> (self.n_qubits - 1 - q)) & 1
            sign[q] = 1.0 - 2.0 * bit
        table = np.full(dim, self.offset, dtype=np.float64)
        for sig, coeff in self.operator.terms.items():
            prod = np.full(dim, coeff.real)
            for q, _ in sig:
                prod *= sign[q]
            table += prod
        return table

    def to_json_obj(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "offset": self.offset,
            "terms": self.operator.to_json_obj(),
            "layout": {
                "n_residues": self.layout.n_residues,
                "n_conformation": self.layout.n_conformation,
                "interaction_pairs": [list(p) for p in self.layout.interaction_pairs],
            },
        }


def polynomial_to_ising(poly: BinaryPolynomial, layout: QubitLayout) -> IsingHamiltonian:
    """Substitute q = (1 - Z) / 2 per bit and expand into Pauli-Z strings."""
    degree = poly.degree()
    if degree > MAX_DEGREE:
        raise ValueError(
            f"monomial degree {degree} > {MAX_DEGREE}: encoding bug upstream"
        )
    accum: dict[Monomial, float] = {}
    for indices, coeff in poly.monomials.items():
        base = coeff / (2 ** len(indices))
        for r in range(len(indices) + 1):
            for subset in itertools.combinations(indices, r):
                value = base * ((-1) ** r)
                accum[subset] = accum.get(subset, 0.0) + value
    operator = OperatorSum()
    offset = 0.0
    for subset, value in accum.items():
        if not subset:
            offset += value
        elif abs(value) > 1e-12:
            operator.add_term(value, {q: "Z" for q in subset})
    return IsingHamiltonian(
        operator=operator,
        offset=offset,
        n_qubits=layout.n_total,
        layout=layout,
    )


def build_hamiltonian(
    instance: ProteinInstance, include_packing: bool = True
) -> IsingHamiltonian:
    return polynomial_to_ising(
        build_polynomial(instance, include_packing), instance.layout()
    )


def two_local_couplings(h: IsingHamiltonian) -> list[tuple[tuple[int, int], float]]:
    """The ZZ couplings J_ij of the Hamiltonian, ordered by qubit pair."""
    out = []
    for sig, coeff in h.operator.terms.items():
        if len(sig) == 2:
            out.append(((sig[0][0], sig[1][0]), coeff.real))
    return sorted(out)
