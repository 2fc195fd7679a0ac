"""Dense statevector simulator for the gate set used by the three ansatze.

Amplitudes are a single complex128 array of length 2**n with qubit 0 as the
most significant bit of the basis label.  Gate kernels act in place through
reshaped views; no gate matrix larger than 4x4 is ever formed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from . import fast_kernels

#: Hard ceiling on register size (dense amplitudes).
MAX_QUBITS = 24

SINGLE_QUBIT_KINDS = {"H", "RX", "RY", "RZ"}
TWO_QUBIT_KINDS = {"CNOT", "CZ", "RZZ", "RYZ", "CR"}

#: |eigenvalue| of the unit generator of each parameterized kind, used by the
#: parameter-shift rule (shift = pi / (4 r) on the effective angle).
GENERATOR_R = {"RX": 0.5, "RY": 0.5, "RZ": 0.5, "RZZ": 1.0, "RYZ": 1.0, "CR": 0.5}

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class Gate:
    """One circuit element.

    The effective rotation angle is ``scale * params[param]`` when ``param``
    references the parameter vector, else ``scale * angle``.  ``scale``
    carries coupling strengths (J for RYZ) and fixed angle multipliers.
    Conventions: RX/RY/RZ(t) = exp(-i t sigma/2); RZZ(t) = exp(-i t Z@Z);
    RYZ acts exp(-i t Y_a Z_b) on operands (a, b); CR(t) = exp(-i t/2 Z_c X_t)
    with operands (control, target); DIAG_PHASE(t) multiplies each basis
    state by exp(-i t E(z)) for the circuit's diagonal energy table.
    """

    kind: str
    qubits: tuple[int, ...]
    param: int | None = None
    angle: float = 0.0
    scale: float = 1.0

    def effective_angle(self, params: np.ndarray) -> float:
        base = self.angle if self.param is None else float(params[self.param])
        return self.scale * base


@dataclass
class Circuit:
    n_qubits: int
    gates: list[Gate]
    n_params: int
    diag_energies: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        for g in self.gates:
            if len(set(g.qubits)) != len(g.qubits):
                raise ValueError(f"duplicate operands in {g}")
            if any(q < 0 or q >= self.n_qubits for q in g.qubits):
                raise ValueError(f"gate {g} acts outside {self.n_qubits} qubits")
            if g.param is not None and not 0 <= g.param < self.n_params:
                raise ValueError(f"gate {g} references parameter out of range")
            if g.kind == "DIAG_PHASE" and self.diag_energies is None:
                raise ValueError("DIAG_PHASE requires a diagonal energy table")

    def parameterized_gates(self) -> list[int]:
        return [i for i, g in enumerate(self.gates) if g.param is not None]

    def to_json_obj(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "n_params": self.n_params,
            "gates": [
                {
                    "kind": g.kind,
                    "qubits": list(g.qubits),
                    "param": g.param,
                    "angle": g.angle,
                    "scale": g.scale,
                }
                for g in self.gates
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


class QuantumState:
    """Owned amplitude vector; every mutation keeps the norm within 1e-10."""

    __slots__ = ("amplitudes", "n_qubits")

    def __init__(self, amplitudes: np.ndarray, n_qubits: int):
        self.amplitudes = amplitudes
        self.n_qubits = n_qubits

    def copy(self) -> "QuantumState":
        return QuantumState(self.amplitudes.copy(), self.n_qubits)

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amplitudes, self.amplitudes).real))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def _check_size(n: int) -> None:
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"register size {n} outside 1..{MAX_QUBITS}")


def init_plus(n: int) -> QuantumState:
    """|+>^n: uniform real amplitudes 2**(-n/2)."""
    _check_size(n)
    amp = np.full(1 << n, 2.0 ** (-n / 2.0), dtype=np.complex128)
    return QuantumState(amp, n)


def init_zero(n: int) -> QuantumState:
    _check_size(n)
    amp = np.zeros(1 << n, dtype=np.complex128)
    amp[0] = 1.0
    return QuantumState(amp, n)


def _single_views(state: QuantumState, q: int):
    view = state.amplitudes.reshape(1 << q, 2, -1)
    return view[:, 0, :], view[:, 1, :]


def _pair_blocks(state: QuantumState, qa: int, qb: int):
    """Views B[x][y] with x the bit of qubit qa < qb and y the bit of qb."""
    view = state.amplitudes.reshape(1 << qa, 2, 1 << (qb - qa - 1), 2, -1)
    return [[view[:, x, :, y, :] for y in (0, 1)] for x in (0, 1)]


def _apply_fast(state: QuantumState, gate: Gate, t: float | None) -> bool:
    """Numba path; returns False when the kind is not covered."""
    amp = state.amplitudes
    n = state.n_qubits
    kind = gate.kind
    if kind in SINGLE_QUBIT_KINDS:
        mask = 1 << (n - 1 - gate.qubits[0])
        if kind == "H":
            fast_kernels.single_rotation(
                amp, mask, _INV_SQRT2, _INV_SQRT2, _INV_SQRT2, -_INV_SQRT2
            )
        elif kind == "RZ":
            fast_kernels.phase_pair(amp, mask, np.exp(-0.5j * t), np.exp(0.5j * t))
        else:
            c, s = np.cos(0.5 * t), np.sin(0.5 * t)
            if kind == "RY":
                fast_kernels.single_rotation(amp, mask, c, -s, s, c)
            else:  # RX
                fast_kernels.single_rotation(amp, mask, c, -1j * s, -1j * s, c)
        return True
    if kind in TWO_QUBIT_KINDS:
        ma = 1 << (n - 1 - gate.qubits[0])
        mb = 1 << (n - 1 - gate.qubits[1])
        if kind == "CNOT":
            fast_kernels.cnot(amp, ma, mb)
        elif kind == "CZ":
            fast_kernels.cz(amp, ma, mb)
        elif kind == "RZZ":
            phase = np.exp(-1j * t)
            fast_kernels.rzz(amp, ma, mb, phase, np.conj(phase))
        elif kind == "RYZ":
            fast_kernels.ryz(amp, ma, mb, np.cos(t), np.sin(t))
        else:  # CR
            fast_kernels.controlled_rx(amp, ma, mb, np.cos(0.5 * t), np.sin(0.5 * t))
        return True
    return False


def apply_gate(state: QuantumState, gate: Gate, params: np.ndarray | None = None,
               diag_energies: np.ndarray | None = None,
               angle_override: float | None = None) -> None:
    """Apply one gate in place.  ``angle_override`` replaces the effective
    angle (used by the parameter-shift rule)."""
    kind = gate.kind
    if fast_kernels.AVAILABLE and kind != "DIAG_PHASE":
        if kind in ("H", "CNOT", "CZ"):
            t = None
        else:
            t = (
                angle_override
                if angle_override is not None
                else gate.effective_angle(params)
            )
        if _apply_fast(state, gate, t):
            return
    if kind == "DIAG_PHASE":
        if diag_energies is None:
            raise ValueError("DIAG_PHASE applied without an energy table")
        t = (
            angle_override
            if angle_override is not None
            else gate.effective_angle(params)
        )
        state.amplitudes *= np.exp(-1j * t * diag_energies)
        return

    if kind in SINGLE_QUBIT_KINDS:
        (q,) = gate.qubits
        a0, a1 = _single_views(state, q)
        if kind == "H":
            t0 = (a0 + a1) * _INV_SQRT2
            a1[...] = (a0 - a1) * _INV_SQRT2
            a0[...] = t0
            return
        t = (
            angle_override
            if angle_override is not None
            else gate.effective_angle(params)
        )
        half = 0.5 * t
        c, s = np.cos(half), np.sin(half)
        if kind == "RY":
            t0 = c * a0 - s * a1
            a1[...] = s * a0 + c * a1
            a0[...] = t0
        elif kind == "RX":
            t0 = c * a0 - 1j * s * a1
            a1[...] = -1j * s * a0 + c * a1
            a0[...] = t0
        else:  # RZ
            a0 *= np.exp(-1j * half)
            a1 *= np.exp(1j * half)
        return

    if kind not in TWO_QUBIT_KINDS:
        raise ValueError(f"unknown gate kind {kind!r}")

    qa, qb = gate.qubits
    flipped = qa > qb
    lo, hi = (qb, qa) if flipped else (qa, qb)
    blocks = _pair_blocks(state, lo, hi)

    def block(first_bit, second_bit):
        # (first, second) refer to gate operand order (gate.qubits)
        return blocks[second_bit][first_bit] if flipped else blocks[first_bit][second_bit]

    if kind == "CNOT":
        tmp = block(1, 0).copy()
        block(1, 0)[...] = block(1, 1)
        block(1, 1)[...] = tmp
        return
    if kind == "CZ":
        block(1, 1)[...] = -block(1, 1)
        return

    t = (
        angle_override
        if angle_override is not None
        else gate.effective_angle(params)
    )
    if kind == "RZZ":
        phase = np.exp(-1j * t)
        block(0, 0)[...] = block(0, 0) * phase
        block(1, 1)[...] = block(1, 1) * phase
        block(0, 1)[...] = block(0, 1) * np.conj(phase)
        block(1, 0)[...] = block(1, 0) * np.conj(phase)
        return
    if kind == "RYZ":
        c, s = np.cos(t), np.sin(t)
        b00, b01 = block(0, 0), block(0, 1)
        b10, b11 = block(1, 0), block(1, 1)
        t00 = c * b00 - s * b10
        b10[...] = s * b00 + c * b10
        b00[...] = t00
        t01 = c * b01 + s * b11
        b11[...] = -s * b01 + c * b11
        b01[...] = t01
        return
    if kind == "CR":
        half = 0.5 * t
        c, s = np.cos(half), np.sin(half)
        # control = first operand (Z), target = second (X); control 0 block
        # rotates by +t, control 1 block by -t
        b00, b01 = block(0, 0), block(0, 1)
        t00 = c * b00 - 1j * s * b01
        b01[...] = -1j * s * b00 + c * b01
        b00[...] = t00
        b10, b11 = block(1, 0), block(1, 1)
        t10 = c * b10 + 1j * s * b11
        b11[...] = 1j * s * b10 + c * b11
        b10[...] = t10
        return


def run_circuit(state: QuantumState, circuit: Circuit,
                params: np.ndarray | None = None,
                shift_gate: int | None = None, shift: float = 0.0) -> QuantumState:
    """Apply every gate in order, optionally shifting one gate's effective
    angle by ``shift``.  Returns the same (mutated) state."""
    for index, gate in enumerate(circuit.gates):
        override = None
        if index == shift_gate:
            override = gate.effective_angle(params) + shift
        apply_gate(state, gate, params, circuit.diag_energies, override)
    return state


def inverse_circuit(circuit: Circuit) -> Circuit:
    """Exact inverse: reversed gate order with negated angles."""
    inv: list[Gate] = []
    for gate in reversed(circuit.gates):
        if gate.kind in ("H", "CNOT", "CZ"):
            inv.append(gate)
        else:
            inv.append(replace(gate, scale=-gate.scale, angle=gate.angle))
    return Circuit(circuit.n_qubits, inv, circuit.n_params, circuit.diag_energies)


def expectation_diagonal(state: QuantumState, energy_table: np.ndarray) -> float:
    """<psi| H |psi> for diagonal H given as a table over basis labels."""
    if len(energy_table) != len(state.amplitudes):
        raise ValueError("energy table size mismatch")
    if fast_kernels.AVAILABLE and energy_table.dtype == np.float64:
        return float(fast_kernels.expectation(state.amplitudes, energy_table))
    return float(np.dot(state.probabilities(), energy_table))


def sample(state: QuantumState, shots: int, seed: int) -> dict[str, int]:
    """Seeded multinomial draw from the outcome distribution."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(seed)
    probs = state.probabilities()
    probs = probs / probs.sum()
    counts = rng.multinomial(shots, probs)
    width = state.n_qubits
    return {
        format(z, f"0{width}b"): int(c) for z, c in enumerate(counts) if c > 0
    }


def success_probability(state: QuantumState, ground_set: set[str]) -> float:
    """Total probability mass on the (possibly degenerate) ground bitstrings."""
    if not ground_set:
        raise ValueError("ground set must be non-empty")
    probs = state.probabilities()
    return float(sum(probs[int(z, 2)] for z in ground_set))


def state_to_bytes(state: QuantumState) -> bytes:
    """Little-endian interleaved re/im f64 dump (debugging aid)."""
    inter = np.empty(2 * len(state.amplitudes), dtype="<f8")
    inter[0::2] = state.amplitudes.real
    inter[1::2] = state.amplitudes.imag
    return inter.tobytes()
