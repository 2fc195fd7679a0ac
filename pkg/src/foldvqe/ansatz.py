"""The three parameterized circuit families: hardware-efficient,
counterdiabatic-pool, and alternating cost/mixer layers.

Circuits do not include state preparation; runners start from |+>^N.
Every rotation carries its own parameter except the shared mixer angle of
the alternating ansatz.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .encoding import IsingHamiltonian, two_local_couplings
from .statevector import Circuit, Gate

#: Pool families the gate set can realize directly.  Y uses RY; YZ and ZY
#: use the two operand orders of the RYZ interaction.  XY/YX would need an
#: extra two-qubit kernel and are outside the supported gate set.
SUPPORTED_POOLS = ("Y", "YZ", "ZY")

DEFAULT_POOL = ("Y", "YZ")


@dataclass(frozen=True)
class AnsatzSpec:
    """Which circuit family to build, and how deep."""

    kind: str  # "CD" | "QAOA" | "HEA"
    layers: int = 1
    pool: tuple[str, ...] = field(default=DEFAULT_POOL)

    def __post_init__(self):
        if self.kind not in ("CD", "QAOA", "HEA"):
            raise ValueError(f"unknown ansatz kind {self.kind!r}")
        if self.layers < 1:
            raise ValueError("layer count must be >= 1")
        for family in self.pool:
            if family not in SUPPORTED_POOLS:
                raise ValueError(
                    f"pool family {family!r} not realizable with the native "
                    f"gate set; supported: {SUPPORTED_POOLS}"
                )

    def arity(self, h: IsingHamiltonian) -> int:
        """Parameter count for this ansatz applied to the Hamiltonian."""
        n = h.n_qubits
        if self.kind == "QAOA":
            return 2 * self.layers
        if self.kind == "HEA":
            return 2 * self.layers * n
        per_two_local = sum(1 for f in self.pool if f in ("YZ", "ZY"))
        per_single = sum(1 for f in self.pool if f == "Y")
        n_2loc = len(two_local_couplings(h))
        return self.layers * (per_single * n + per_two_local * n_2loc)


def build_cd(h: IsingHamiltonian, layers: int = 1,
             pool: tuple[str, ...] = DEFAULT_POOL) -> Circuit:
    """Counterdiabatic-pool circuit: per layer, a parameterized Y rotation on
    every qubit, then one YZ interaction per two-local coupling (in coupling
    order, each with its own parameter, coupling strength folded into the
    gate scale)."""
    couplings = two_local_couplings(h)
    if not couplings:
        raise ValueError("Hamiltonian has no two-local couplings")
    spec = AnsatzSpec("CD", layers, pool)
    n = h.n_qubits
    gates: list[Gate] = []
    k = 0
    for _ in range(layers):
        for family in pool:
            if family == "Y":
                for q in range(n):
                    gates.append(Gate("RY", (q,), param=k))
                    k += 1
            elif family == "YZ":
                for (i, j), coupling in couplings:
                    gates.append(Gate("RYZ", (i, j), param=k, scale=coupling))
                    k += 1
            else:  # ZY: Y on the higher index, Z on the lower
                for (i, j), coupling in couplings:
                    gates.append(Gate("RYZ", (j, i), param=k, scale=coupling))
                    k += 1
    circuit = Circuit(n, gates, k)
    assert k == spec.arity(h)
    return circuit


def build_qaoa(h: IsingHamiltonian, layers: int = 1) -> Circuit:
    """Alternating exact cost phase and transverse mixer:
    per layer exp(-i gamma H) via a diagonal phase, then RX(2 beta) on every
    qubit so the mixer is exp(-i beta sum_i X_i).  Parameters ordered
    [gamma_1, beta_1, gamma_2, beta_2, ...]."""
    n = h.n_qubits
    gates: list[Gate] = []
    k = 0
    for _ in range(layers):
        gates.append(Gate("DIAG_PHASE", (), param=k))
        k += 1
        for q in range(n):
            gates.append(Gate("RX", (q,), param=k, scale=2.0))
        k += 1
    return Circuit(n, gates, k, diag_energies=h.energy_table())


def build_hea(n: int, layers: int = 1) -> Circuit:
    """Hardware-efficient layer: parameterized Y rotations, a CNOT ring over
    cyclic nearest neighbors, then parameterized Y rotations again."""
    if n < 2:
        raise ValueError("hardware-efficient ansatz needs at least 2 qubits")
    gates: list[Gate] = []
    k = 0
    for _ in range(layers):
        for q in range(n):
            gates.append(Gate("RY", (q,), param=k))
            k += 1
        for q in range(n):
            gates.append(Gate("CNOT", (q, (q + 1) % n)))
        for q in range(n):
            gates.append(Gate("RY", (q,), param=k))
            k += 1
    return Circuit(n, gates, k)


def build_ansatz(spec: AnsatzSpec, h: IsingHamiltonian) -> Circuit:
    if spec.kind == "CD":
        return build_cd(h, spec.layers, spec.pool)
    if spec.kind == "QAOA":
        return build_qaoa(h, spec.layers)
    return build_hea(h.n_qubits, spec.layers)
