from .state import QuantumState, apply_pauli, fidelity
from .pauli import (
    PauliTerm, Hamiltonian, build_heisenberg, ising_critical, hamiltonian_matrix,
    exact_energy, expectation, ground_truth, estimate_single_shot_variance,
)
from .circuit import Gate, ParamCircuit, build_efficient_su2, prepare_state, rotation, cx, wrap_angles
from .channel import NoiseModel, ObservationChannel, observe

__all__ = [
    "QuantumState", "apply_pauli", "fidelity",
    "PauliTerm", "Hamiltonian", "build_heisenberg", "ising_critical", "hamiltonian_matrix",
    "exact_energy", "expectation", "ground_truth", "estimate_single_shot_variance",
    "Gate", "ParamCircuit", "build_efficient_su2", "prepare_state", "rotation", "cx", "wrap_angles",
    "NoiseModel", "ObservationChannel", "observe",
]
