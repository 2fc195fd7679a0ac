"""Sparse algebra over weighted sums of Pauli strings.

Terms are kept as maps from qubit index to axis ('X', 'Y', 'Z'); absent
indices are identity.  Qubit 0 is the most significant bit everywhere,
matching the statevector and encoding modules.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import reduce

import numpy as np

#: Coefficients with magnitude below this are dropped on merge.
DROP_THRESHOLD = 1e-12

#: Largest system accepted by the dense-matrix test oracle.
DENSE_QUBIT_LIMIT = 12

# Single-qubit products: (a, b) -> (phase, result), identity handled separately.
_MUL = {
    ("X", "X"): (1, None),
    ("Y", "Y"): (1, None),
    ("Z", "Z"): (1, None),
    ("X", "Y"): (1j, "Z"),
    ("Y", "Z"): (1j, "X"),
    ("Z", "X"): (1j, "Y"),
    ("Y", "X"): (-1j, "Z"),
    ("Z", "Y"): (-1j, "X"),
    ("X", "Z"): (-1j, "Y"),
}

_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

Signature = tuple[tuple[int, str], ...]


@dataclass(frozen=True)
class PauliTerm:
    """One Pauli string with a complex weight."""

    coefficient: complex
    factors: Signature  # sorted ((qubit, axis), ...), no identity entries

    @staticmethod
    def from_dict(coefficient: complex, factors: dict[int, str]) -> "PauliTerm":
        for axis in factors.values():
            if axis not in ("X", "Y", "Z"):
                raise ValueError(f"invalid Pauli axis {axis!r}")
        return PauliTerm(coefficient, tuple(sorted(factors.items())))

    @property
    def locality(self) -> int:
        return len(self.factors)

    def family(self) -> str:
        """Axis pattern in qubit-index order, e.g. 'Y', 'YZ', 'XY', 'YZZ'."""
        return "".join(axis for _, axis in self.factors)

    def __repr__(self) -> str:
        body = " ".join(f"{axis}{q}" for q, axis in self.factors) or "I"
        return f"({self.coefficient:g})*{body}"


def multiply(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Product of two Pauli strings with the accumulated {±1, ±i} phase."""
    coeff = a.coefficient * b.coefficient
    out = dict(a.factors)
    for qubit, axis_b in b.factors:
        axis_a = out.pop(qubit, None)
        if axis_a is None:
            out[qubit] = axis_b
            continue
        phase, result = _MUL[(axis_a, axis_b)]
        coeff *= phase
        if result is not None:
            out[qubit] = result
    return PauliTerm(coeff, tuple(sorted(out.items())))


class OperatorSum:
    """Weighted sum of Pauli strings, merged by factor signature."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Signature, complex] | None = None):
        self.terms: dict[Signature, complex] = {}
        if terms:
            for sig, coeff in terms.items():
                self.add_term(coeff, dict(sig))

    @staticmethod
    def from_terms(terms: list[tuple[complex, dict[int, str]]]) -> "OperatorSum":
        op = OperatorSum()
        for coeff, factors in terms:
            op.add_term(coeff, factors)
        return op

    def add_term(self, coefficient: complex, factors: dict[int, str]) -> None:
        sig = PauliTerm.from_dict(coefficient, factors).factors
        merged = self.terms.get(sig, 0) + coefficient
        if abs(merged) <= DROP_THRESHOLD:
            self.terms.pop(sig, None)
        else:
            self.terms[sig] = merged

    def __iter__(self):
        for sig, coeff in sorted(self.terms.items()):
            yield PauliTerm(coeff, sig)

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "OperatorSum") -> "OperatorSum":
        out = OperatorSum(dict(self.terms))
        for sig, coeff in other.terms.items():
            out.add_term(coeff, dict(sig))
        return out

    def __sub__(self, other: "OperatorSum") -> "OperatorSum":
        return self + other.scaled(-1)

    def scaled(self, factor: complex) -> "OperatorSum":
        out = OperatorSum()
        for sig, coeff in self.terms.items():
            out.add_term(factor * coeff, dict(sig))
        return out

    def signatures(self) -> set[Signature]:
        return set(self.terms)

    def max_qubit(self) -> int:
        """Largest qubit index used, or -1 for a constant/empty sum."""
        return max((q for sig in self.terms for q, _ in sig), default=-1)

    def __repr__(self) -> str:
        return " + ".join(repr(t) for t in self) or "0"

    # -- serialization ------------------------------------------------------

    def to_json_obj(self) -> list[dict]:
        out = []
        for term in self:
            out.append(
                {
                    "coeff_re": float(term.coefficient.real),
                    "coeff_im": float(term.coefficient.imag),
                    "paulis": {str(q): axis for q, axis in term.factors},
                }
            )
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @staticmethod
    def from_json_obj(obj: list[dict]) -> "OperatorSum":
        op = OperatorSum()
        for entry in obj:
            coeff = complex(entry["coeff_re"], entry.get("coeff_im", 0.0))
            factors = {int(q): axis for q, axis in entry["paulis"].items()}
            op.add_term(coeff, factors)
        return op

    @staticmethod
    def from_json(text: str) -> "OperatorSum":
        return OperatorSum.from_json_obj(json.loads(text))


def commutator(a: OperatorSum, b: OperatorSum) -> OperatorSum:
    """AB - BA with merged terms; exactly empty when A and B commute."""
    out = OperatorSum()
    for sig_a, ca in a.terms.items():
        ta = PauliTerm(ca, sig_a)
        for sig_b, cb in b.terms.items():
            tb = PauliTerm(cb, sig_b)
            ab = multiply(ta, tb)
            ba = multiply(tb, ta)
            # Pauli strings either commute or anticommute: products share a
            # signature, so the difference is either 0 or 2*AB.
            diff = ab.coefficient - ba.coefficient
            if abs(diff) > DROP_THRESHOLD:
                out.add_term(diff, dict(ab.factors))
    return out


def nc_pool(h_mixer: OperatorSum, h: OperatorSum, order: int) -> OperatorSum:
    """Pool of Pauli strings from the odd nested commutators of the gauge
    potential expansion, with the interpolation parameter treated formally.

    The expansion interpolates H_a = (1-s)*H_mixer + s*H and nests
    commutators of H_a onto dH = H - H_mixer; strings appearing at nesting
    depths 1, 3, ..., 2*order-1 for any interior s enter the pool.  Two
    sample values of s are enough to cover both endpoint components.
    Coefficients are normalized to 1: membership only, each pool term gets
    its own free parameter downstream.
    """
    if order < 1:
        raise ValueError("expansion order must be >= 1")
    dh = h - h_mixer
    strings: set[Signature] = set()
    for s in (0.25, 0.75):
        h_a = h_mixer.scaled(1.0 - s) + h.scaled(s)
        nested = dh
        for depth in range(1, 2 * order):
            nested = commutator(h_a, nested)
            if depth % 2 == 1:
                strings |= nested.signatures()
    pool = OperatorSum()
    for sig in sorted(strings):
        pool.add_term(1.0, dict(sig))
    return pool


def truncate_locality(a: OperatorSum, k_max: int) -> OperatorSum:
    """Keep only terms acting on at most k_max qubits."""
    out = OperatorSum()
    for sig, coeff in a.terms.items():
        if len(sig) <= k_max:
            out.add_term(coeff, dict(sig))
    return out


def pool_families(a: OperatorSum) -> set[str]:
    """Distinct axis patterns present in a sum (e.g. {'Y', 'YZ', 'XY'})."""
    return {PauliTerm(c, sig).family() for sig, c in a.terms.items()}


def to_dense_matrix(
    a: OperatorSum, n_qubits: int, limit: int = DENSE_QUBIT_LIMIT
) -> np.ndarray:
    """Kronecker-product matrix with qubit 0 as the most significant bit.

    Test oracle only; guarded against accidental large builds.
    """
    if n_qubits > limit:
        raise ValueError(f"dense matrix guard: {n_qubits} qubits > limit {limit}")
    if a.max_qubit() >= n_qubits:
        raise ValueError("term acts on a qubit outside the register")
    dim = 2**n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for sig, coeff in a.terms.items():
        axes = dict(sig)
        mats = [_MATS[axes.get(q, "I")] for q in range(n_qubits)]
        out += coeff * reduce(np.kron, mats, np.eye(1, dtype=complex))
    return out
