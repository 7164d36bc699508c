# -*- coding: utf-8 -*-
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from errors import InvalidInput

# Qubit 0 is the most significant bit of the basis index, i.e. axis 0 of the
# (2,)*Q amplitude tensor.
PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class QuantumState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        n = amps.size
        if n < 2 or n & (n - 1):
            raise InvalidInput(f"state dimension {n} is not a power of two")
        if abs(np.vdot(amps, amps).real - 1.0) > 1e-10:
            raise InvalidInput("state is not normalized")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self) -> int:
        return int(self.amplitudes.size).bit_length() - 1

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    @classmethod
    def zero(cls, n_qubits: int) -> "QuantumState":
        amps = np.zeros(2 ** n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(amps)

    @classmethod
    def from_vector(cls, vec) -> "QuantumState":
        """Normalizes an arbitrary nonzero vector."""
        v = np.asarray(vec, dtype=complex).ravel()
        norm = np.linalg.norm(v)
        if norm == 0:
            raise InvalidInput("cannot normalize the zero vector")
        return cls(v / norm)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_qubits)


def apply_1q(tensor: np.ndarray, matrix: np.ndarray, qubit: int) -> np.ndarray:
    out = np.tensordot(matrix, tensor, axes=([1], [qubit]))
    return np.moveaxis(out, 0, qubit)


def apply_pauli(amplitudes: np.ndarray, letters: str) -> np.ndarray:
    """Returns P|psi> for the Pauli string `letters` (one letter per qubit)."""
    n_qubits = len(letters)
    tensor = np.asarray(amplitudes, dtype=complex).reshape((2,) * n_qubits)
    for q, letter in enumerate(letters):
        if letter != "I":
            tensor = apply_1q(tensor, PAULI_MATRICES[letter], q)
    return tensor.reshape(-1)


def fidelity(psi_gs: QuantumState, psi: QuantumState) -> float:
    """Overlap magnitude |<psi_gs|psi>|, invariant under global phase."""
    if psi_gs.dim != psi.dim:
        raise InvalidInput(f"dimension mismatch: {psi_gs.dim} vs {psi.dim}")
    return float(min(1.0, abs(np.vdot(psi_gs.amplitudes, psi.amplitudes))))
