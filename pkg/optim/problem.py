# -*- coding: utf-8 -*-
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sim.circuit import ParamCircuit, prepare_state
from sim.pauli import Hamiltonian, exact_energy, ground_truth
from sim.state import QuantumState, fidelity


@dataclass(frozen=True)
class VQEProblem:
    """Circuit + Hamiltonian + ground truth; exact metrics for trace rows."""
    circuit: ParamCircuit
    hamiltonian: Hamiltonian
    e_ground: float
    psi_ground: QuantumState

    @classmethod
    def build(cls, circuit: ParamCircuit, hamiltonian: Hamiltonian) -> "VQEProblem":
        e_gs, psi_gs = ground_truth(hamiltonian)
        return cls(circuit=circuit, hamiltonian=hamiltonian, e_ground=e_gs, psi_ground=psi_gs)

    @property
    def n_params(self) -> int:
        return self.circuit.n_params

    @property
    def vd(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.circuit.vd)

    def state(self, x) -> QuantumState:
        return prepare_state(self.circuit, x)

    def energy(self, x) -> float:
        return exact_energy(self.hamiltonian, self.state(x))

    def fidelity(self, x) -> float:
        return fidelity(self.psi_ground, self.state(x))

    def delta_energy(self, x) -> float:
        return self.energy(x) - self.e_ground

    def delta_fidelity(self, x) -> float:
        return 1.0 - self.fidelity(x)

    def default_sigma0_2(self, x0) -> float:
        """sigma0 from a rough energy scale: |E(x0)| clamped below by the coefficient 1-norm / 4."""
        scale = max(abs(self.energy(x0)), self.hamiltonian.coefficient_norm / 4.0)
        if not scale > 0:
            return 1.0
        return float(scale * scale)

    def initial_point(self, seed: int) -> np.ndarray:
        # stream 0 of the seed; shared by every optimizer at equal seeds
        return np.random.default_rng([seed, 0]).uniform(0.0, 2.0 * np.pi, self.n_params)
