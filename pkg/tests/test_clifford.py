import numpy as np
import pytest

from conftest import dense_pauli, taylor_expm

from flatmagic.clifford import (
    TWO_QUBIT_CLIFFORD_COUNT,
    CircuitSpec,
    GateOp,
    bond_order,
    brickwork_layer,
    build_circuit,
    cnot_gate,
    gate_rng,
    h_gate,
    noisy_gate,
    sample_two_qubit_clifford,
    sample_two_qubit_clifford_index,
    tableau_from_index,
    two_qubit_clifford_unitaries,
    _symplectic_cache,
)
from flatmagic.errors import UnsupportedError, ValidationError
from flatmagic.magic import pauli_expectation, stabilizer_linear_entropy
from flatmagic.paulis import enumerate_paulis
from flatmagic.statevec import (
    anti_flatness,
    apply_layer,
    half_cut,
    product_state,
    purity_moments,
    reduced_density_matrix,
    zero_state,
)

ALL_2Q_PAULIS = [dense_pauli(p.label) for p in enumerate_paulis(2)]


def signed_pauli_match(m: np.ndarray) -> bool:
    """True iff m equals +-P for some two-qubit Pauli, within 1e-12."""
    for p in ALL_2Q_PAULIS:
        for sign in (1.0, -1.0):
            if np.max(np.abs(m - sign * p)) < 1e-12:
                return True
    return False


class TestGroupEnumeration:
    def test_symplectic_count(self):
        assert _symplectic_cache().shape[0] == 720

    def test_tableau_count_and_distinctness(self):
        keys = set()
        for idx in range(TWO_QUBIT_CLIFFORD_COUNT):
            tab = tableau_from_index(idx)
            keys.add(tuple((p.x_mask, p.z_mask, s) for p, s in tab.image_x + tab.image_z))
        assert len(keys) == 11520

    def test_tableaux_commutation(self):
        rng = np.random.default_rng(0)
        for idx in rng.integers(0, TWO_QUBIT_CLIFFORD_COUNT, size=50):
            assert tableau_from_index(int(idx)).commutation_ok()

    def test_unitaries_are_unitary(self):
        u = two_qubit_clifford_unitaries()
        prod = np.einsum("nij,nkj->nik", u, u.conj())
        assert np.max(np.abs(prod - np.eye(4))) < 1e-12


class TestSampling:
    def test_conjugation_maps_paulis_to_signed_paulis(self):
        rng = np.random.default_rng(42)
        for _ in range(40):
            gate = sample_two_qubit_clifford(rng)
            u = gate.matrix
            for label in ("XI", "IX", "ZI", "IZ"):
                img = u @ dense_pauli(label) @ u.conj().T
                assert signed_pauli_match(img)

    def test_fixed_seed_determinism(self):
        g1 = sample_two_qubit_clifford(np.random.default_rng(42))
        g2 = sample_two_qubit_clifford(np.random.default_rng(42))
        assert g1.label == g2.label
        np.testing.assert_array_equal(g1.matrix, g2.matrix)

    def test_uniformity_smoke(self):
        # 1e5 draws over 11520 bins: every count within 5 sigma of N/11520
        n_samples = 100_000
        rng = np.random.default_rng(123)
        idx = np.array([sample_two_qubit_clifford_index(rng) for _ in range(n_samples)])
        counts = np.bincount(idx, minlength=TWO_QUBIT_CLIFFORD_COUNT)
        p = 1.0 / TWO_QUBIT_CLIFFORD_COUNT
        bound = 5 * np.sqrt(n_samples * p * (1 - p))
        assert np.max(np.abs(counts - n_samples * p)) <= bound


class TestBrickwork:
    def test_two_qubits_single_bond(self):
        gates = brickwork_layer(2, 0, master_seed=1)
        assert len(gates) == 1 and gates[0].targets == (0, 1)

    def test_five_qubits_even_then_odd(self):
        gates = brickwork_layer(5, 0, master_seed=1)
        assert [g.targets for g in gates] == [(0, 1), (2, 3), (1, 2), (3, 4)]
        assert bond_order(5) == [0, 2, 1, 3]

    def test_generator_mode_gate_set(self):
        seen = set()
        for layer in range(30):
            for g in brickwork_layer(4, layer, master_seed=3, mode="generators"):
                seen.add(g.label)
        assert seen == {"H", "S", "CNOT"}

    def test_deep_circuit_reaches_haar_purity(self):
        # long-run simulation oracle: half-cut purity approaches ~(dA+dB)/(d+1)
        purities = []
        for r in range(5):
            state = product_state([0.0] * 8)
            spec = CircuitSpec(8, 200, 0.0, 1000 + r)
            for gates in build_circuit(spec):
                apply_layer(state, gates)
            purities.append(purity_moments(reduced_density_matrix(state, half_cut(8))).p2)
        assert np.mean(purities) < 0.2

    def test_layer_needs_two_qubits(self):
        with pytest.raises(ValidationError):
            brickwork_layer(1, 0, master_seed=0)


class TestNoisyGate:
    def test_sigma_zero_is_exact(self):
        gate = cnot_gate(0, 1)
        assert noisy_gate(gate, 0.0, np.random.default_rng(1)) is gate

    def test_unitary_after_dressing(self):
        gate = noisy_gate(cnot_gate(0, 1), 0.4, np.random.default_rng(2))
        np.testing.assert_allclose(gate.matrix @ gate.matrix.conj().T, np.eye(4), atol=1e-12)

    def test_one_qubit_unsupported(self):
        with pytest.raises(UnsupportedError):
            noisy_gate(h_gate(0), 0.1, np.random.default_rng(3))

    def test_negative_sigma(self):
        with pytest.raises(ValidationError):
            noisy_gate(cnot_gate(0, 1), -0.1, np.random.default_rng(3))

    def test_matches_taylor_series_oracle(self):
        # rebuild V = exp(-i sum eps P) from the same draws with dense kron
        # matrices and a scaled-and-squared Taylor series
        sigma, seed = 0.1, 77
        dressed = noisy_gate(cnot_gate(0, 1), sigma, np.random.default_rng(seed))
        eps = np.random.default_rng(seed).normal(0.0, sigma, size=15)
        letters = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
        ham = np.zeros((4, 4), dtype=complex)
        for a in range(15):
            x, z = divmod(a + 1, 4)
            label = letters[(x & 1, z & 1)] + letters[((x >> 1) & 1, (z >> 1) & 1)]
            ham += eps[a] * dense_pauli(label)
        v = taylor_expm(-1j * ham)
        expected = v @ cnot_gate(0, 1).matrix @ v.conj().T
        np.testing.assert_allclose(dressed.matrix, expected, atol=1e-10)


class TestBuildCircuit:
    def test_zero_layers(self):
        assert build_circuit(CircuitSpec(4, 0, 0.0, 5)) == []

    def test_bit_identical_rebuild(self):
        spec = CircuitSpec(5, 4, 0.1, master_seed=9)
        a, b = build_circuit(spec), build_circuit(spec)
        for la, lb in zip(a, b):
            for ga, gb in zip(la, lb):
                assert ga.targets == gb.targets
                np.testing.assert_array_equal(ga.matrix, gb.matrix)

    def test_noise_dresses_every_two_qubit_gate(self):
        for gates in build_circuit(CircuitSpec(4, 3, 0.05, 2)):
            for g in gates:
                assert g.label.endswith("+noise")

    def test_noiseless_circuit_preserves_stabilizerness(self):
        state = zero_state(4)
        for gates in build_circuit(CircuitSpec(4, 6, 0.0, 11)):
            apply_layer(state, gates)
        assert stabilizer_linear_entropy(state) < 1e-9

    def test_stabilizer_pauli_expectations_quantized(self):
        state = zero_state(3)
        for gates in build_circuit(CircuitSpec(3, 10, 0.0, 13)):
            apply_layer(state, gates)
        for p in enumerate_paulis(3):
            val = pauli_expectation(state, p)
            assert min(abs(val - t) for t in (-1.0, 0.0, 1.0)) < 1e-9

    def test_flatness_along_stabilizer_orbit(self):
        state = zero_state(4)
        for gates in build_circuit(CircuitSpec(4, 30, 0.0, 17)):
            apply_layer(state, gates)
            for sub in ([0], [0, 1], [0, 2], [1, 2, 3]):
                assert anti_flatness(state, sub) < 1e-10

    def test_gate_rng_streams_independent_of_order(self):
        a = gate_rng(5, 2, 1, 0).integers(0, 1 << 31)
        gate_rng(5, 0, 0, 0).integers(0, 1 << 31, size=10)  # unrelated draws
        b = gate_rng(5, 2, 1, 0).integers(0, 1 << 31)
        assert a == b
