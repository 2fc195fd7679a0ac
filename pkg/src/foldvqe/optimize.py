"""Gradient-based variational loop over exact statevector expectations.

Gradients use the parameter-shift rule on every two-eigenvalue generator;
parameters attached to the diagonal cost phase (whose generator is the full
Hamiltonian) fall back to central finite differences with a warning.
"""

from __future__ import annotations

import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ansatz import AnsatzSpec, build_ansatz
from .encoding import IsingHamiltonian, ProteinInstance, build_hamiltonian
from .oracle import bitstring_oracle
from .statevector import (
    GENERATOR_R,
    Circuit,
    apply_gate,
    expectation_diagonal,
    init_plus,
    run_circuit,
)

#: Central-difference step for parameters outside the shift rule.
FD_STEP = 1e-4

#: Largest register scanned exhaustively for the success-probability ground set.
GROUND_SCAN_MAX_QUBITS = 20

DEFAULT_LEARNING_RATES = {"adam": 0.05, "adagrad": 0.5}


@dataclass(frozen=True)
class OptimizerConfig:
    algorithm: str = "adam"  # "adam" | "adagrad"
    learning_rate: float | None = None
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    max_iterations: int = 500
    tolerance: float = 1e-6
    init_range: float = np.pi  # initial angles uniform in [-init_range, init_range]
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ("adam", "adagrad"):
            raise ValueError(f"unknown optimizer {self.algorithm!r}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")

    @property
    def lr(self) -> float:
        if self.learning_rate is not None:
            return self.learning_rate
        return DEFAULT_LEARNING_RATES[self.algorithm]

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "learning_rate": self.lr,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "epsilon": self.epsilon,
            "max_iterations": self.max_iterations,
            "tolerance": self.tolerance,
            "init_range": self.init_range,
            "seed": self.seed,
        }


@dataclass
class RunRecord:
    """Everything one optimization instance produced."""

    seed: int
    energies: list[float]
    params_initial: list[float]
    params_final: list[float]
    final_energy: float
    min_energy: float
    success_probability: float
    success_basis: str  # "oracle" | "best_observed"
    top_states: list[tuple[str, float]]
    termination: str  # "converged" | "max_iterations"
    n_iterations: int
    n_evaluations: int
    wall_time_s: float
    config: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "seed": self.seed,
            "energies": self.energies,
            "params_initial": self.params_initial,
            "params_final": self.params_final,
            "final_energy": self.final_energy,
            "min_energy": self.min_energy,
            "success_probability": self.success_probability,
            "success_basis": self.success_basis,
            "top_states": [[z, p] for z, p in self.top_states],
            "termination": self.termination,
            "n_iterations": self.n_iterations,
            "n_evaluations": self.n_evaluations,
            "wall_time_s": self.wall_time_s,
            "config": self.config,
        }


class _EvalCounter:
    __slots__ = ("count",)

    def __init__(self):
        self.count = 0


def evaluate_energy(circuit: Circuit, params: np.ndarray,
                    energy_table: np.ndarray,
                    counter: _EvalCounter | None = None) -> float:
    state = init_plus(circuit.n_qubits)
    run_circuit(state, circuit, params)
    if counter is not None:
        counter.count += 1
    return expectation_diagonal(state, energy_table)


def parameter_shift_gradient(circuit: Circuit, energy_table: np.ndarray,
                             params: np.ndarray,
                             counter: _EvalCounter | None = None) -> np.ndarray:
    """dC/dtheta via two shifted evaluations per parameterized gate.

    Contributions from gates sharing a parameter sum.  Gates whose generator
    has more than two eigenvalues (the diagonal cost phase) use central
    finite differences instead.
    """
    grad = np.zeros(circuit.n_params)
    fd_params = {
        g.param
        for g in circuit.gates
        if g.kind == "DIAG_PHASE" and g.param is not None
    }
    if fd_params:
        warnings.warn(
            "diagonal-phase parameters use finite differences "
            "(multi-eigenvalue generator)",
            UserWarning,
        )
        for k in sorted(fd_params):
            shifted = params.copy()
            shifted[k] = params[k] + FD_STEP
            plus = evaluate_energy(circuit, shifted, energy_table, counter)
            shifted[k] = params[k] - FD_STEP
            minus = evaluate_energy(circuit, shifted, energy_table, counter)
            grad[k] = (plus - minus) / (2.0 * FD_STEP)

    prefix = init_plus(circuit.n_qubits)
    for index, gate in enumerate(circuit.gates):
        if gate.param is not None and gate.param not in fd_params:
            r = GENERATOR_R[gate.kind]
            shift = np.pi / (4.0 * r)
            base = gate.effective_angle(params)
            delta = 0.0
            for sign in (1.0, -1.0):
                work = prefix.copy()
                apply_gate(work, gate, params, circuit.diag_energies,
                           angle_override=base + sign * shift)
                for later in circuit.gates[index + 1:]:
                    apply_gate(work, later, params, circuit.diag_energies)
                if counter is not None:
                    counter.count += 1
                delta += sign * expectation_diagonal(work, energy_table)
            # d/dtheta = scale * r * [C(phi + pi/4r) - C(phi - pi/4r)]
            grad[gate.param] += gate.scale * r * delta
        apply_gate(prefix, gate, params, circuit.diag_energies)
    return grad


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0


def step_adam(state: AdamState, params: np.ndarray, grad: np.ndarray,
              config: OptimizerConfig) -> np.ndarray:
    state.t += 1
    state.m = config.beta1 * state.m + (1.0 - config.beta1) * grad
    state.v = config.beta2 * state.v + (1.0 - config.beta2) * grad**2
    m_hat = state.m / (1.0 - config.beta1**state.t)
    v_hat = state.v / (1.0 - config.beta2**state.t)
    return params - config.lr * m_hat / (np.sqrt(v_hat) + config.epsilon)


@dataclass
class AdagradState:
    accum: np.ndarray


def step_adagrad(state: AdagradState, params: np.ndarray, grad: np.ndarray,
                 config: OptimizerConfig) -> np.ndarray:
    state.accum = state.accum + grad**2
    return params - config.lr * grad / np.sqrt(state.accum + config.epsilon)


@dataclass
class PreparedProblem:
    """Hamiltonian, circuit and ground truth shared by a batch of runs."""

    hamiltonian: IsingHamiltonian
    circuit: Circuit
    energy_table: np.ndarray
    ground_set: set[str]
    ground_energy: float | None
    oracle_available: bool


def prepare_problem(instance: ProteinInstance, spec: AnsatzSpec) -> PreparedProblem:
    h = build_hamiltonian(instance)
    circuit = build_ansatz(spec, h)
    table = h.energy_table() if circuit.diag_energies is None else circuit.diag_energies
    if h.n_qubits <= GROUND_SCAN_MAX_QUBITS:
        energy, bitstrings = bitstring_oracle(h)
        return PreparedProblem(h, circuit, table, set(bitstrings), energy, True)
    return PreparedProblem(h, circuit, table, set(), None, False)


def _top_states(state, k: int = 10) -> list[tuple[str, float]]:
    probs = state.probabilities()
    order = np.argsort(probs)[::-1][:k]
    width = state.n_qubits
    return [(format(int(z), f"0{width}b"), float(probs[z])) for z in order]


def run_prepared(problem: PreparedProblem, config: OptimizerConfig,
                 seed: int | None = None) -> RunRecord:
    seed = config.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    circuit, table = problem.circuit, problem.energy_table
    params = rng.uniform(-config.init_range, config.init_range, circuit.n_params)
    params_initial = params.copy()

    counter = _EvalCounter()
    opt_state = (
        AdamState(np.zeros_like(params), np.zeros_like(params))
        if config.algorithm == "adam"
        else AdagradState(np.zeros_like(params))
    )
    step = step_adam if config.algorithm == "adam" else step_adagrad

    start = time.time()
    energies = [evaluate_energy(circuit, params, table, counter)]
    termination = "max_iterations"
    iterations = 0
    for _ in range(config.max_iterations):
        grad = parameter_shift_gradient(circuit, table, params, counter)
        params = step(opt_state, params, grad, config)
        energies.append(evaluate_energy(circuit, params, table, counter))
        iterations += 1
        if abs(energies[-1] - energies[-2]) < config.tolerance:
            termination = "converged"
            break

    final_state = init_plus(circuit.n_qubits)
    run_circuit(final_state, circuit, params)
    probs = final_state.probabilities()
    if problem.oracle_available:
        success = float(
            sum(probs[int(z, 2)] for z in problem.ground_set)
        )
        basis = "oracle"
    else:
        # no exhaustive ground set: report mass on the best-energy state in
        # the final distribution's high-probability support, flagged as such
        top = np.argsort(probs)[::-1][:1024]
        best = min(top, key=lambda z: table[z])
        success = float(probs[best])
        basis = "best_observed"
    return RunRecord(
        seed=seed,
        energies=[float(e) for e in energies],
        params_initial=[float(x) for x in params_initial],
        params_final=[float(x) for x in params],
        final_energy=float(energies[-1]),
        min_energy=float(min(energies)),
        success_probability=success,
        success_basis=basis,
        top_states=_top_states(final_state),
        termination=termination,
        n_iterations=iterations,
        n_evaluations=counter.count,
        wall_time_s=time.time() - start,
        config={**config.to_dict(), "seed": seed},
    )


def run(instance: ProteinInstance, spec: AnsatzSpec,
        config: OptimizerConfig) -> RunRecord:
    return run_prepared(prepare_problem(instance, spec), config)


def _batch_worker(args) -> RunRecord:
    problem, config, seed = args
    return run_prepared(problem, config, seed)


def batch(instance: ProteinInstance, spec: AnsatzSpec, config: OptimizerConfig,
          n_instances: int, jobs: int = 1) -> list[RunRecord]:
    """Independent seeded runs seed, seed+1, ...; deterministic per seed
    regardless of execution order or parallelism."""
    problem = prepare_problem(instance, spec)
    return batch_prepared(problem, config, n_instances, jobs)


def batch_prepared(problem: PreparedProblem, config: OptimizerConfig,
                   n_instances: int, jobs: int = 1) -> list[RunRecord]:
    seeds = [config.seed + k for k in range(n_instances)]
    tasks = [(problem, config, s) for s in seeds]
    if jobs <= 1:
        return [_batch_worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_batch_worker, tasks))
