"""Native-gate decompositions of the YZ interaction and their verification.

Three backend templates rewrite exp(-i J theta Y_i Z_j) into a native
two-qubit gate plus single-qubit rotations.  Published circuit notations
leave 1/2-factor conventions implicit, so every template's internal angle
factors are fixed here by the numerical equivalence suite, which is the
source of truth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statevector import Circuit, Gate, QuantumState, apply_gate, init_zero

BACKENDS = ("zz_native", "cr_native", "cz_native")

#: Native two-qubit gate per backend.
NATIVE_TWO_QUBIT = {"zz_native": "RZZ", "cr_native": "CR", "cz_native": "CZ"}


def decompose_ryz(backend: str, i: int, j: int, coupling: float,
                  theta: float | None = None,
                  param: int | None = None) -> list[Gate]:
    """Gate sequence equal to exp(-i * coupling * theta * Y_i Z_j) up to a
    global phase, in the given backend's native set.

    Either ``theta`` (literal angle) or ``param`` (parameter reference) must
    be given; the coupling rides in the scale of the inner rotation.
    """
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    if i == j:
        raise ValueError("interaction needs two distinct qubits")

    def inner(kind: str, qubits: tuple[int, ...], scale: float) -> Gate:
        if param is not None:
            return Gate(kind, qubits, param=param, scale=scale)
        return Gate(kind, qubits, angle=theta, scale=scale)

    if backend == "zz_native":
        # x-basis change on the Y qubit turns the native ZZ into YZ
        return [
            Gate("RX", (i,), angle=np.pi / 2),
            inner("RZZ", (i, j), coupling),
            Gate("RX", (i,), angle=-np.pi / 2),
        ]
    if backend == "cr_native":
        # z rotations on the target map the cross-resonance ZX onto ZY;
        # CR(t) = exp(-i t/2 Z X) needs twice the bare angle
        return [
            Gate("RZ", (i,), angle=-np.pi / 2),
            inner("CR", (j, i), 2.0 * coupling),
            Gate("RZ", (i,), angle=np.pi / 2),
        ]
    # cz_native: build ZZ from two CZ-conjugated Hadamard pairs around an
    # Rz on j (Rz needs twice the bare angle), then the same x-basis change
    return [
        Gate("RX", (i,), angle=np.pi / 2),
        Gate("H", (j,)),
        Gate("CZ", (i, j)),
        Gate("H", (j,)),
        inner("RZ", (j,), 2.0 * coupling),
        Gate("H", (j,)),
        Gate("CZ", (i, j)),
        Gate("H", (j,)),
        Gate("RX", (i,), angle=-np.pi / 2),
    ]


def sequence_unitary(gates: list[Gate], n_qubits: int,
                     params: np.ndarray | None = None) -> np.ndarray:
    """Dense unitary of a gate sequence, built column by column."""
    dim = 1 << n_qubits
    out = np.empty((dim, dim), dtype=np.complex128)
    for col in range(dim):
        state = init_zero(n_qubits)
        state.amplitudes[0] = 0.0
        state.amplitudes[col] = 1.0
        for gate in gates:
            apply_gate(state, gate, params)
        out[:, col] = state.amplitudes
    return out


def ryz_unitary(coupling: float, theta: float) -> np.ndarray:
    """Reference kernel exp(-i*coupling*theta * Y (x) Z) on two qubits."""
    y = np.array([[0, -1j], [1j, 0]])
    z = np.diag([1.0, -1.0])
    yz = np.kron(y, z)
    t = coupling * theta
    return np.cos(t) * np.eye(4) - 1j * np.sin(t) * yz


def verify_equivalence(candidate: np.ndarray, target: np.ndarray) -> float:
    """Max |difference| after aligning global phase on the largest element."""
    if candidate.shape != target.shape:
        raise ValueError("dimension mismatch")
    pivot = np.unravel_index(np.argmax(np.abs(target)), target.shape)
    if abs(candidate[pivot]) < 1e-14:
        return float(np.max(np.abs(candidate - target)))
    phase = target[pivot] / candidate[pivot]
    phase /= abs(phase)
    return float(np.max(np.abs(candidate * phase - target)))


def check_backend(backend: str, trials: int = 100, seed: int = 0) -> float:
    """Worst-case deviation of the backend template from the YZ kernel over
    random couplings and angles."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        coupling = float(rng.uniform(-2.0, 2.0))
        theta = float(rng.uniform(-np.pi, np.pi))
        gates = decompose_ryz(backend, 0, 1, coupling, theta=theta)
        u = sequence_unitary(gates, 2)
        worst = max(worst, verify_equivalence(u, ryz_unitary(coupling, theta)))
    return worst


@dataclass(frozen=True)
class TranspileReport:
    backend: str
    n_two_qubit_before: int
    n_two_qubit_after: int
    pruned: int


def transpile_circuit(circuit: Circuit, backend: str,
                      params: np.ndarray | None = None,
                      prune_threshold: float = 0.0) -> tuple[Circuit, TranspileReport]:
    """Rewrite every YZ interaction into the backend's native gates.

    With a positive ``prune_threshold`` and bound parameters, interactions
    whose effective angle magnitude |J * theta| falls below the threshold are
    dropped entirely (their rotations are nearly identity but their native
    two-qubit gates would still accumulate hardware error).
    """
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    out: list[Gate] = []
    before = after = pruned = 0
    for gate in circuit.gates:
        if gate.kind == "RYZ":
            before += 1
            if prune_threshold > 0.0:
                if params is None:
                    raise ValueError("pruning needs bound parameters")
                if abs(gate.effective_angle(params)) < prune_threshold:
                    pruned += 1
                    continue
            i, j = gate.qubits
            if gate.param is not None:
                seq = decompose_ryz(backend, i, j, gate.scale, param=gate.param)
            else:
                seq = decompose_ryz(backend, i, j, gate.scale, theta=gate.angle)
            out.extend(seq)
            after += 1
        elif len(gate.qubits) == 2:
            before += 1
            after += 1
            out.append(gate)
        else:
            out.append(gate)
    native = Circuit(circuit.n_qubits, out, circuit.n_params, circuit.diag_energies)
    report = TranspileReport(backend, before, after, pruned)
    return native, report


def prune_sweep(circuit: Circuit, params: np.ndarray,
                thresholds: list[float]) -> list[tuple[float, int]]:
    """Two-qubit gate count remaining at each pruning threshold."""
    angles = [
        abs(g.effective_angle(params)) for g in circuit.gates if g.kind == "RYZ"
    ]
    fixed_two_qubit = sum(
        1 for g in circuit.gates if g.kind != "RYZ" and len(g.qubits) == 2
    )
    return [
        (t, fixed_two_qubit + sum(1 for a in angles if a >= t)) for t in thresholds
    ]
