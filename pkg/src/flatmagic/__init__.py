"""Quantify non-stabilizerness of pure states via entanglement-spectrum
anti-flatness: state-vector kernels, Pauli-sweep magic measures, Clifford
orbit experiments, and exact small-instance oracles."""

from .clifford import (
    CircuitSpec,
    GateOp,
    brickwork_layer,
    build_circuit,
    noisy_gate,
    sample_two_qubit_clifford,
    two_qubit_clifford_unitaries,
)
from .errors import (
    CapacityError,
    FlatmagicError,
    NumericalConsistencyError,
    PartitionError,
    UnavailableError,
    UnsupportedError,
    ValidationError,
)
from .experiments import (
    ExperimentConfig,
    RunRecord,
    derive_seed,
    run_experiment,
    witness,
)
from .magic import (
    MagicMeasures,
    XiDistribution,
    m2_from_mlin,
    magic_measures,
    pauli_expectation,
    product_mlin,
    sre,
    stabilizer_linear_entropy,
    xi_distribution,
)
from .oracle import (
    FlatnessConstant,
    StabilizerStateSet,
    c_constant,
    enumerate_stabilizer_states,
    exhaustive_clifford_average,
    stabilizer_fidelity,
    toric_code_ground_state,
)
from .paulis import PauliString, enumerate_paulis, pauli_from_index
from .statevec import (
    PureState,
    ReducedDensityMatrix,
    SpectrumMoments,
    anti_flatness,
    apply_gate,
    apply_layer,
    entanglement_spectrum,
    half_cut,
    product_state,
    purity_moments,
    reduced_density_matrix,
    zero_state,
)

__version__ = "0.1.0"
