import numpy as np
import pytest

from foldvqe.encoding import (
    BinaryPolynomial,
    ProteinInstance,
    build_hamiltonian,
    build_polynomial,
    distance_sq_polynomial,
    polynomial_to_ising,
    qubit_layout,
    turn_axis_indicators,
    two_local_couplings,
)
from foldvqe.interactions import (
    InteractionModel,
    load_interaction_table,
    mj_model,
    toy_hp_model,
)
from foldvqe.lattice import TurnSequence, encode_bits, pair_distance_sq
from foldvqe.oracle import enumerate_walks


def zero_model():
    from foldvqe.interactions import RESIDUES

    return InteractionModel(
        "custom", {frozenset((a, b)): 0.0 for a in RESIDUES for b in RESIDUES}
    )


class TestLayout:
    @pytest.mark.parametrize(
        "n,conf,total", [(6, 5, 6), (7, 7, 9), (8, 9, 13), (9, 11, 17)]
    )
    def test_register_sizes(self, n, conf, total):
        layout = qubit_layout(n)
        assert layout.n_conformation == conf
        assert layout.n_total == total

    def test_pair_list_for_six_residues(self):
        assert qubit_layout(6).interaction_pairs == ((1, 6),)

    def test_too_short(self):
        with pytest.raises(ValueError):
            qubit_layout(3)


class TestBinaryPolynomial:
    def test_multiplication_is_multilinear(self):
        q0 = BinaryPolynomial.variable(0)
        assert (q0 * q0).monomials == {(0,): 1.0}

    def test_evaluate(self):
        p = BinaryPolynomial({(): 1.0, (0,): 2.0, (0, 1): -3.0})
        assert p.evaluate([1, 1]) == 0.0
        assert p.evaluate([1, 0]) == 3.0
        assert p.evaluate([0, 1]) == 1.0


class TestTurnIndicators:
    def test_indicators_partition_unity(self):
        rng = np.random.default_rng(0)
        for k in range(1, 8):
            total = BinaryPolynomial()
            for g in turn_axis_indicators(k):
                total = total + g
            bits = {i: b for i, b in enumerate(rng.integers(0, 2, size=20))}
            assert total.evaluate(bits) == pytest.approx(1.0)

    def test_fixed_turns(self):
        g1 = turn_axis_indicators(1)
        assert [g.evaluate({}) for g in g1] == [0.0, 1.0, 0.0, 0.0]
        g2 = turn_axis_indicators(2)
        assert [g.evaluate({}) for g in g2] == [1.0, 0.0, 0.0, 0.0]


def bits_for_turns(turns, n_residues):
    """Register conformation bits realizing the given turn sequence."""
    layout = qubit_layout(n_residues)
    z = encode_bits(TurnSequence(tuple(turns)), {}, layout)
    return [int(c) for c in z]


class TestDistancePolynomial:
    def test_matches_geometry_on_all_walks(self):
        n = 7
        for s in enumerate_walks(n, skip_backtracking=False):
            bits = bits_for_turns(s.turns, n)
            for i, j in [(1, 6), (2, 7), (1, 4), (3, 6), (2, 5), (1, 7)]:
                poly = distance_sq_polynomial(i, j, n)
                assert poly.evaluate(bits) == pytest.approx(
                    pair_distance_sq(s, i, j)
                )

    def test_degree_at_most_four(self):
        assert distance_sq_polynomial(1, 8, 9).degree() <= 4


class TestBuildPolynomial:
    def test_four_residues_growth_only(self):
        inst = ProteinInstance("AAAA", zero_model(), lambda_gc=7.0, lambda_in=5.0)
        poly = build_polynomial(inst)
        # no eligible pairs: every monomial comes from the growth constraint
        layout = inst.layout()
        assert layout.interaction_pairs == ()
        values = []
        for s in enumerate_walks(4, skip_backtracking=False):
            bits = bits_for_turns(s.turns, 4)
            e = poly.evaluate(bits)
            values.append((s.turns, e))
            assert e == (7.0 if s.backtracks() else 0.0)
        assert min(e for _, e in values) == 0.0

    def test_contact_lowers_energy_by_pair_term(self):
        # Claiming a true contact changes the energy by the gated bracket;
        # at contact distance the distance part vanishes.
        inst = ProteinInstance("KLVFFA", mj_model())
        layout = inst.layout()
        poly = build_polynomial(inst, include_packing=False)
        s = TurnSequence((1, 0, 3, 1, 0))  # forms the (1, 6) contact
        base = [int(c) for c in encode_bits(s, {(1, 6): 0}, layout)]
        claimed = [int(c) for c in encode_bits(s, {(1, 6): 1}, layout)]
        delta = poly.evaluate(claimed) - poly.evaluate(base)
        assert delta == pytest.approx(inst.pair_energy(1, 6))


class TestIsingConversion:
    def test_constant(self):
        h = polynomial_to_ising(BinaryPolynomial({(): 1.0}), qubit_layout(6))
        assert h.offset == 1.0
        assert len(h.operator) == 0

    def test_single_variable(self):
        h = polynomial_to_ising(BinaryPolynomial({(0,): 2.0}), qubit_layout(6))
        assert h.offset == pytest.approx(1.0)
        assert h.operator.terms == {((0, "Z"),): -1.0}

    def test_pair_monomial(self):
        h = polynomial_to_ising(BinaryPolynomial({(0, 1): 4.0}), qubit_layout(6))
        assert h.offset == pytest.approx(1.0)
        assert h.operator.terms == {
            ((0, "Z"),): -1.0,
            ((1, "Z"),): -1.0,
            ((0, "Z"), (1, "Z")): 1.0,
        }
        poly = BinaryPolynomial({(0, 1): 4.0})
        for z in range(4):
            bits = [(z >> 1) & 1, z & 1]
            bitstring = f"{bits[0]}{bits[1]}" + "0" * 4
            assert h.energy_of_bitstring(bitstring) == pytest.approx(
                poly.evaluate(bits)
            )

    def test_degree_guard(self):
        poly = BinaryPolynomial({tuple(range(6)): 1.0})
        with pytest.raises(ValueError):
            polynomial_to_ising(poly, qubit_layout(8))


class TestEnergyOfBitstring:
    def test_bit_zero_is_plus_one(self):
        h = polynomial_to_ising(BinaryPolynomial({(0,): 1.0}), qubit_layout(6))
        # q0 = (1 - Z0)/2: bitstring "0..." has q0 = 0
        assert h.energy_of_bitstring("000000") == pytest.approx(0.0)
        assert h.energy_of_bitstring("100000") == pytest.approx(1.0)

    def test_polynomial_equivalence_exhaustive_small(self):
        inst = ProteinInstance("KLVFFA", mj_model())
        poly = build_polynomial(inst)
        h = build_hamiltonian(inst)
        for z in range(2**h.n_qubits):
            bitstring = format(z, f"0{h.n_qubits}b")
            bits = [int(c) for c in bitstring]
            assert h.energy_of_bitstring(bitstring) == pytest.approx(
                poly.evaluate(bits), abs=1e-9
            )

    def test_polynomial_equivalence_random_large(self):
        inst = ProteinInstance("AVDINNNA", mj_model())
        poly = build_polynomial(inst)
        h = build_hamiltonian(inst)
        rng = np.random.default_rng(5)
        table = h.energy_table()
        for _ in range(512):
            z = int(rng.integers(0, 2**h.n_qubits))
            bitstring = format(z, f"0{h.n_qubits}b")
            bits = [int(c) for c in bitstring]
            expected = poly.evaluate(bits)
            assert h.energy_of_bitstring(bitstring) == pytest.approx(
                expected, abs=1e-9
            )
            assert table[z] == pytest.approx(expected, abs=1e-9)

    def test_length_check(self):
        h = build_hamiltonian(ProteinInstance("KLVFFA", mj_model()))
        with pytest.raises(ValueError):
            h.energy_of_bitstring("01")


class TestHamiltonianStructure:
    @pytest.mark.parametrize(
        "sequence,n_qubits,n_2loc",
        [("APRLRFY", 9, 25), ("AVDINNNA", 13, 52), ("CYIQNCPLG", 17, 80)],
    )
    def test_benchmark_coupling_counts(self, sequence, n_qubits, n_2loc):
        h = build_hamiltonian(ProteinInstance(sequence, mj_model()))
        assert h.n_qubits == n_qubits
        assert len(two_local_couplings(h)) == n_2loc

    def test_z_only_and_five_local(self):
        h = build_hamiltonian(ProteinInstance("CYIQNCPLG", mj_model()))
        for term in h.operator:
            assert all(axis == "Z" for _, axis in term.factors)
            assert term.locality <= 5

    def test_coupling_ceiling(self):
        for sequence in ("KLVFFA", "APRLRFY", "AVDINNNA", "CYIQNCPLG"):
            h = build_hamiltonian(ProteinInstance(sequence, mj_model()))
            n = h.n_qubits
            assert len(two_local_couplings(h)) <= n * (n - 1) // 2

    def test_couplings_sorted(self):
        h = build_hamiltonian(ProteinInstance("APRLRFY", mj_model()))
        pairs = [p for p, _ in two_local_couplings(h)]
        assert pairs == sorted(pairs)
        assert all(i < j for i, j in pairs)


class TestInstanceValidation:
    def test_missing_residue(self):
        table = InteractionModel("custom", {frozenset(("A", "A")): -1.0})
        with pytest.raises(ValueError, match="Z"):
            ProteinInstance("AZAA", table)

    def test_too_short(self):
        with pytest.raises(ValueError):
            ProteinInstance("AAA", toy_hp_model())

    def test_default_multipliers(self):
        inst = ProteinInstance("KLVFFA", mj_model())
        scale = inst.max_abs_pair_energy()
        assert inst.lambda_gc == pytest.approx(10.0 * scale)
        assert inst.lambda_in == pytest.approx(8.0 * scale)


class TestInteractionTables:
    def test_csv_symmetry(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text("res_a,res_b,energy\nA,F,-2.0\n")
        model = load_interaction_table(path)
        assert model.pair_energy("F", "A") == -2.0
        assert model.pair_energy("A", "F") == -2.0

    def test_empty_file_valid_but_unusable(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("res_a,res_b,energy\n")
        model = load_interaction_table(path)
        with pytest.raises(ValueError):
            ProteinInstance("AAAA", model)

    def test_conflicting_rows_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("res_a,res_b,energy\nA,F,-2.0\nF,A,-3.0\n")
        with pytest.raises(ValueError, match="conflicting"):
            load_interaction_table(path)

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\nA,F,-2.0\n")
        with pytest.raises(ValueError, match="header"):
            load_interaction_table(path)

    def test_toy_hp_values(self):
        model = toy_hp_model()
        assert model.pair_energy("L", "F") == -1.0
        assert model.pair_energy("L", "K") == 0.0
        assert model.pair_energy("K", "R") == 0.0
