import numpy as np
import pytest
from scipy.linalg import expm

from foldvqe.pauli import OperatorSum, to_dense_matrix
from foldvqe.statevector import (
    Circuit,
    Gate,
    QuantumState,
    apply_gate,
    expectation_diagonal,
    init_plus,
    init_zero,
    inverse_circuit,
    run_circuit,
    sample,
    success_probability,
)


def random_state(n, seed):
    rng = np.random.default_rng(seed)
    amp = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    amp /= np.linalg.norm(amp)
    return QuantumState(amp.astype(np.complex128), n)


def op(*entries):
    return OperatorSum.from_terms([(c, dict(f)) for c, f in entries])


def gate_unitary_oracle(gate: Gate, n: int, angle: float) -> np.ndarray:
    """Dense reference unitary built from the gate's generator via expm."""
    kind = gate.kind
    if kind == "H":
        h1 = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
        mats = [h1 if q == gate.qubits[0] else np.eye(2) for q in range(n)]
        out = mats[0]
        for m in mats[1:]:
            out = np.kron(out, m)
        return out
    if kind == "CNOT":
        c, t = gate.qubits
        p0 = (op((1.0, ())) + op((1.0, ((c, "Z"),)))).scaled(0.5)
        p1 = (op((1.0, ())) - op((1.0, ((c, "Z"),)))).scaled(0.5)
        flip = op((1.0, ((t, "X"),)))
        m1 = to_dense_matrix(p1, n) @ to_dense_matrix(flip, n)
        return to_dense_matrix(p0, n) + m1
    if kind == "CZ":
        c, t = gate.qubits
        p0 = (op((1.0, ())) + op((1.0, ((c, "Z"),)))).scaled(0.5)
        p1 = (op((1.0, ())) - op((1.0, ((c, "Z"),)))).scaled(0.5)
        zt = op((1.0, ((t, "Z"),)))
        return to_dense_matrix(p0, n) + to_dense_matrix(p1, n) @ to_dense_matrix(
            zt, n
        )
    generators = {
        "RX": lambda q: op((0.5, ((q[0], "X"),))),
        "RY": lambda q: op((0.5, ((q[0], "Y"),))),
        "RZ": lambda q: op((0.5, ((q[0], "Z"),))),
        "RZZ": lambda q: op((1.0, ((q[0], "Z"), (q[1], "Z")))),
        "RYZ": lambda q: op((1.0, tuple(sorted([(q[0], "Y"), (q[1], "Z")])))),
        "CR": lambda q: op((0.5, tuple(sorted([(q[0], "Z"), (q[1], "X")])))),
    }
    gen = to_dense_matrix(generators[kind](gate.qubits), n)
    return expm(-1j * angle * gen)


class TestInit:
    def test_plus_single_qubit(self):
        state = init_plus(1)
        np.testing.assert_allclose(state.amplitudes, [2**-0.5, 2**-0.5])

    def test_plus_two_qubits(self):
        np.testing.assert_allclose(init_plus(2).amplitudes, [0.5] * 4)

    def test_norm_at_seventeen(self):
        assert init_plus(17).norm() == pytest.approx(1.0, abs=1e-12)

    def test_size_guard(self):
        with pytest.raises(ValueError):
            init_plus(25)
        with pytest.raises(ValueError):
            init_plus(0)


class TestGateKernels:
    def test_h_on_zero_gives_plus(self):
        state = init_zero(1)
        apply_gate(state, Gate("H", (0,)))
        np.testing.assert_allclose(state.amplitudes, init_plus(1).amplitudes)

    def test_ryz_zero_angle_is_identity(self):
        state = random_state(2, 1)
        before = state.amplitudes.copy()
        apply_gate(state, Gate("RYZ", (0, 1), angle=0.0, scale=1.0))
        np.testing.assert_allclose(state.amplitudes, before, atol=1e-14)

    @pytest.mark.parametrize("kind", ["RX", "RY", "RZ", "H"])
    @pytest.mark.parametrize("q", [0, 1, 2])
    def test_single_qubit_gates_match_expm_oracle(self, kind, q):
        n = 3
        rng = np.random.default_rng(hash((kind, q)) % 2**32)
        angle = float(rng.uniform(-np.pi, np.pi))
        gate = Gate(kind, (q,), angle=angle)
        state = random_state(n, 2)
        expected = gate_unitary_oracle(gate, n, angle) @ state.amplitudes
        apply_gate(state, gate)
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-12)

    @pytest.mark.parametrize("kind", ["CNOT", "CZ", "RZZ", "RYZ", "CR"])
    @pytest.mark.parametrize("qubits", [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2)])
    def test_two_qubit_gates_match_expm_oracle(self, kind, qubits):
        n = 3
        rng = np.random.default_rng(hash((kind, qubits)) % 2**32)
        angle = float(rng.uniform(-np.pi, np.pi))
        gate = Gate(kind, qubits, angle=angle)
        state = random_state(n, 3)
        expected = gate_unitary_oracle(gate, n, angle) @ state.amplitudes
        apply_gate(state, gate)
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-12)

    def test_ryz_with_coupling_scale_matches_oracle(self):
        n, j, theta = 2, 0.7, 1.3
        gate = Gate("RYZ", (0, 1), angle=theta, scale=j)
        state = random_state(n, 4)
        expected = gate_unitary_oracle(gate, n, j * theta) @ state.amplitudes
        apply_gate(state, gate)
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-10)


def random_circuit(n, n_gates, seed, kinds=("H", "RX", "RY", "RZ", "CNOT", "CZ", "RZZ", "RYZ", "CR")):
    rng = np.random.default_rng(seed)
    gates = []
    for _ in range(n_gates):
        kind = kinds[rng.integers(len(kinds))]
        if kind in ("H", "RX", "RY", "RZ"):
            qubits = (int(rng.integers(n)),)
        else:
            a, b = rng.choice(n, size=2, replace=False)
            qubits = (int(a), int(b))
        gates.append(
            Gate(kind, qubits, angle=float(rng.uniform(-np.pi, np.pi)),
                 scale=float(rng.uniform(0.2, 1.5)))
        )
    return Circuit(n, gates, 0)


class TestCircuits:
    def test_norm_preserved_over_thousand_gates(self):
        circuit = random_circuit(13, 1000, seed=11)
        state = init_plus(13)
        run_circuit(state, circuit)
        assert abs(state.norm() - 1.0) < 1e-10

    def test_circuit_then_inverse_returns_start(self):
        circuit = random_circuit(6, 120, seed=12)
        state = init_plus(6)
        run_circuit(state, circuit)
        run_circuit(state, inverse_circuit(circuit))
        deviation = np.max(np.abs(state.amplitudes - init_plus(6).amplitudes))
        assert deviation < 1e-8

    def test_validation(self):
        with pytest.raises(ValueError):
            Circuit(2, [Gate("RY", (3,))], 0)
        with pytest.raises(ValueError):
            Circuit(2, [Gate("CNOT", (1, 1))], 0)
        with pytest.raises(ValueError):
            Circuit(2, [Gate("RY", (0,), param=0)], 0)
        with pytest.raises(ValueError):
            Circuit(2, [Gate("DIAG_PHASE", (), param=0)], 1)


def multi_z_phase(state: QuantumState, signature, coeff, gamma):
    """Independent per-term cost-phase path: exp(-i gamma c Z_S)."""
    n = state.n_qubits
    idx = np.arange(1 << n)
    sign = np.ones(1 << n)
    for q, _ in signature:
        sign *= 1.0 - 2.0 * ((idx >> (n - 1 - q)) & 1)
    state.amplitudes *= np.exp(-1j * gamma * coeff * sign)


class TestExpectation:
    def test_plus_state_with_z_field_is_zero(self):
        n = 6
        idx = np.arange(1 << n)
        z0 = 1.0 - 2.0 * ((idx >> (n - 1)) & 1)  # eigenvalues of Z on qubit 0
        assert expectation_diagonal(init_plus(n), z0) == pytest.approx(0.0)

    def test_basis_state_returns_its_energy(self):
        rng = np.random.default_rng(0)
        table = rng.normal(size=2**4)
        state = init_zero(4)
        assert expectation_diagonal(state, table) == pytest.approx(table[0])

    def test_matches_pauli_term_path_on_random_states(self):
        from foldvqe.encoding import ProteinInstance, build_hamiltonian
        from foldvqe.interactions import mj_model

        h = build_hamiltonian(ProteinInstance("APRLRFY", mj_model()))
        table = h.energy_table()
        for seed in range(5):
            state = random_state(9, seed + 100)
            fast = expectation_diagonal(state, table)
            # term-by-term evaluation through dense sign vectors
            slow = h.offset
            idx = np.arange(1 << 9)
            probs = state.probabilities()
            for sig, coeff in h.operator.terms.items():
                sign = np.ones(1 << 9)
                for q, _ in sig:
                    sign *= 1.0 - 2.0 * ((idx >> (9 - 1 - q)) & 1)
                slow += coeff.real * float(np.dot(probs, sign))
            assert fast == pytest.approx(slow, abs=1e-9)

    def test_diag_phase_equals_per_term_rotations(self):
        from foldvqe.encoding import ProteinInstance, build_hamiltonian
        from foldvqe.interactions import mj_model

        h = build_hamiltonian(ProteinInstance("KLVFFA", mj_model()))
        table = h.energy_table()
        gamma = 0.731
        a = random_state(6, 42)
        b = a.copy()
        circuit = Circuit(
            6, [Gate("DIAG_PHASE", (), param=0)], 1, diag_energies=table
        )
        run_circuit(a, circuit, np.array([gamma]))
        for sig, coeff in h.operator.terms.items():
            multi_z_phase(b, sig, coeff.real, gamma)
        b.amplitudes *= np.exp(-1j * gamma * h.offset)
        assert np.max(np.abs(a.amplitudes - b.amplitudes)) < 1e-9


class TestSampling:
    def test_basis_state_single_bin(self):
        state = init_zero(3)
        hist = sample(state, shots=50, seed=1)
        assert hist == {"000": 50}

    def test_total_equals_shots(self):
        hist = sample(init_plus(4), shots=1000, seed=2)
        assert sum(hist.values()) == 1000

    def test_single_qubit_plus_is_balanced(self):
        hist = sample(init_plus(1), shots=100_000, seed=3)
        for key in ("0", "1"):
            assert abs(hist[key] / 100_000 - 0.5) < 0.01  # 3 sigma ~ 0.0047

    def test_seeded_reproducibility(self):
        a = sample(init_plus(5), shots=500, seed=9)
        b = sample(init_plus(5), shots=500, seed=9)
        assert a == b

    def test_shots_guard(self):
        with pytest.raises(ValueError):
            sample(init_plus(1), shots=0, seed=0)


class TestSuccessProbability:
    def test_ground_basis_state(self):
        state = init_zero(4)
        assert success_probability(state, {"0000"}) == pytest.approx(1.0)

    def test_uniform_state_single_ground(self):
        assert success_probability(init_plus(6), {"000000"}) == pytest.approx(1 / 64)

    def test_degenerate_set_sums(self):
        state = init_plus(6)
        assert success_probability(state, {"000000", "000001"}) == pytest.approx(
            2 / 64
        )

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError):
            success_probability(init_plus(2), set())
