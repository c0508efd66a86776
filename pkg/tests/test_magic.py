import numpy as np
import pytest

from conftest import kron_states, random_state

from flatmagic.clifford import CircuitSpec, build_circuit
from flatmagic.errors import CapacityError, UnsupportedError, ValidationError
from flatmagic.magic import (
    m2_from_mlin,
    magic_measures,
    pauli_expectation,
    product_mlin,
    sre,
    stabilizer_linear_entropy,
    xi_distribution,
)
from flatmagic.paulis import PauliString, enumerate_paulis
from flatmagic.statevec import PureState, apply_layer, product_state, zero_state

T_STATE_THETA = np.pi / 4
LOG_4_3 = np.log(4.0 / 3.0)


class TestPauliExpectation:
    def test_z_on_zero(self):
        assert pauli_expectation(zero_state(1), PauliString.from_label("Z")) == pytest.approx(1.0)

    def test_x_on_t_state(self):
        # 2x2 matrix arithmetic: <X> = cos(pi/4)
        val = pauli_expectation(product_state([T_STATE_THETA]), PauliString.from_label("X"))
        assert val == pytest.approx(np.sqrt(2) / 2, abs=1e-14)

    def test_xx_on_bell(self):
        amps = np.zeros(4, dtype=complex)
        amps[0] = amps[3] = 1 / np.sqrt(2)
        assert pauli_expectation(PureState(2, amps), PauliString.from_label("XX")) == pytest.approx(1.0)

    def test_size_mismatch(self):
        with pytest.raises(ValidationError):
            pauli_expectation(zero_state(2), PauliString.from_label("X"))

    def test_against_dense_matrices(self):
        rng = np.random.default_rng(2)
        for n in (1, 2, 3):
            state = random_state(rng, n)
            for p in enumerate_paulis(n):
                oracle = np.vdot(state.amplitudes, p.matrix() @ state.amplitudes).real
                assert pauli_expectation(state, p) == pytest.approx(oracle, abs=1e-12)


class TestXiDistribution:
    def test_zero_state(self):
        xi = xi_distribution(zero_state(1))
        named = {lab: xi.value(PauliString.from_label(lab)) for lab in "IXYZ"}
        assert named == pytest.approx({"I": 0.5, "X": 0.0, "Y": 0.0, "Z": 0.5}, abs=1e-14)

    def test_plus_state(self):
        xi = xi_distribution(product_state([0.0]))
        named = {lab: xi.value(PauliString.from_label(lab)) for lab in "IXYZ"}
        assert named == pytest.approx({"I": 0.5, "X": 0.5, "Y": 0.0, "Z": 0.0}, abs=1e-14)

    def test_t_state(self):
        # single-qubit expectations squared: (1, 1/2, 1/2, 0) / 2
        xi = xi_distribution(product_state([T_STATE_THETA]))
        named = {lab: xi.value(PauliString.from_label(lab)) for lab in "IXYZ"}
        assert named == pytest.approx({"I": 0.5, "X": 0.25, "Y": 0.25, "Z": 0.0}, abs=1e-14)

    def test_normalization_random_states(self):
        rng = np.random.default_rng(4)
        for n in (2, 4, 6):
            xi = xi_distribution(random_state(rng, n))
            assert float(xi.values.sum()) == pytest.approx(1.0, abs=1e-9)

    def test_matches_single_pauli_kernel(self):
        rng = np.random.default_rng(6)
        state = random_state(rng, 4)
        xi = xi_distribution(state)
        for p in enumerate_paulis(4):
            assert xi.value(p) == pytest.approx(
                pauli_expectation(state, p) ** 2 / 16, abs=1e-12
            )

    def test_cap_error_names_cap(self):
        with pytest.raises(CapacityError) as exc:
            xi_distribution(zero_state(3), cap=2)
        assert "2" in str(exc.value)
        assert exc.value.cap == 2


class TestSre:
    def test_stabilizer_states_zero(self):
        for state in (zero_state(3), product_state([0.0, np.pi / 2])):
            assert sre(state, 2) == pytest.approx(0.0, abs=1e-12)

    def test_t_state(self):
        # brute-force oracle: sum of tr^4 = 3/2, M_2 = -log(3/4)
        assert sre(product_state([T_STATE_THETA]), 2) == pytest.approx(LOG_4_3, abs=1e-12)

    def test_additivity_of_t_products(self):
        assert sre(product_state([T_STATE_THETA] * 2), 2) == pytest.approx(2 * LOG_4_3, abs=1e-12)

    def test_alpha_one_unsupported(self):
        with pytest.raises(UnsupportedError):
            sre(zero_state(1), 1)

    def test_alpha_positive_required(self):
        with pytest.raises(ValidationError):
            sre(zero_state(1), -2)


class TestStabilizerLinearEntropy:
    def test_zero_states(self):
        for n in (1, 3, 5):
            assert stabilizer_linear_entropy(zero_state(n)) == pytest.approx(0.0, abs=1e-12)

    def test_t_state(self):
        # 1 - 2 * (3/8)
        assert stabilizer_linear_entropy(product_state([T_STATE_THETA])) == pytest.approx(0.25, abs=1e-12)

    def test_single_qubit_closed_form(self):
        for theta in (0.1, 0.35, 0.7, 1.2):
            want = np.sin(2 * theta) ** 2 / 4
            assert stabilizer_linear_entropy(product_state([theta])) == pytest.approx(want, abs=1e-12)

    def test_positive_off_stabilizer_angles(self):
        for theta in (0.2, 0.6, 1.0):
            assert stabilizer_linear_entropy(product_state([theta])) > 1e-4

    def test_upper_bound(self):
        rng = np.random.default_rng(14)
        for n in (1, 2, 3, 4):
            bound = 1 - 2 / (2**n + 1)
            for _ in range(5):
                assert stabilizer_linear_entropy(random_state(rng, n)) < bound + 1e-10


class TestM2FromMlin:
    def test_values(self):
        assert m2_from_mlin(0.0) == 0.0
        assert m2_from_mlin(0.25) == pytest.approx(LOG_4_3, abs=1e-15)
        assert m2_from_mlin(7 / 16) == pytest.approx(np.log(16 / 9), abs=1e-15)

    def test_domain_errors(self):
        with pytest.raises(ValidationError):
            m2_from_mlin(1.0)
        with pytest.raises(ValidationError):
            m2_from_mlin(-0.1)

    def test_consistent_with_sre(self):
        m_lin = stabilizer_linear_entropy(product_state([T_STATE_THETA]))
        assert m2_from_mlin(m_lin) == pytest.approx(sre(product_state([T_STATE_THETA]), 2), abs=1e-10)


class TestProductMlin:
    def test_all_zero_angles(self):
        assert product_mlin([0.0] * 6) == 0.0

    def test_single_t(self):
        assert product_mlin([T_STATE_THETA]) == pytest.approx(0.25, abs=1e-15)

    def test_two_t(self):
        assert product_mlin([T_STATE_THETA] * 2) == pytest.approx(7 / 16, abs=1e-15)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(15)
        for n in (1, 2, 4, 6):
            thetas = rng.uniform(0, np.pi, n)
            want = stabilizer_linear_entropy(product_state(thetas))
            assert product_mlin(thetas) == pytest.approx(want, abs=1e-9)


class TestInvarianceProperties:
    def test_clifford_invariance(self):
        rng = np.random.default_rng(16)
        for trial in range(10):
            n = int(rng.integers(2, 5))
            state = random_state(rng, n)
            before = sre(state, 2)
            spec = CircuitSpec(n, 3, 0.0, int(rng.integers(1 << 30)))
            for gates in build_circuit(spec):
                apply_layer(state, gates)
            assert sre(state, 2) == pytest.approx(before, abs=1e-9)

    def test_additivity_random_states(self):
        rng = np.random.default_rng(17)
        for trial in range(10):
            a, b = random_state(rng, 2), random_state(rng, int(rng.integers(1, 3)))
            joint = PureState(
                a.num_qubits + b.num_qubits, kron_states(a.amplitudes, b.amplitudes)
            )
            assert sre(joint, 2) == pytest.approx(sre(a, 2) + sre(b, 2), abs=1e-9)


def test_magic_measures_bundle():
    mm = magic_measures(product_state([T_STATE_THETA]), alphas=(2, 3))
    assert mm.m_lin == pytest.approx(0.25, abs=1e-12)
    assert mm.m2 == pytest.approx(LOG_4_3, abs=1e-12)
    assert mm.m_alpha[2.0] == pytest.approx(mm.m2, abs=1e-10)
    assert mm.m_alpha[3.0] > 0
