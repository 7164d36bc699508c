# -*- coding: utf-8 -*-
"""
Shot-noise observation channel. Energies are estimated per measurement group;
shot counts are always per operator group.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from errors import InvalidConfig
from sim.circuit import ParamCircuit, prepare_state
from sim.pauli import Hamiltonian, exact_energy
from sim.state import apply_1q

NOISE_KINDS = ("gaussian-exact", "sampled")

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)
_SDG = np.array([[1, 0], [0, -1j]], dtype=complex)
# Rotations taking the X / Y eigenbasis onto the computational basis.
_BASIS_CHANGE = {"X": _H, "Y": _H @ _SDG}


@dataclass(frozen=True)
class NoiseModel:
    kind: str = "gaussian-exact"
    eta2: float = 1.0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise InvalidConfig(f"noise kind must be one of {NOISE_KINDS}, got {self.kind!r}")
        if not (self.eta2 > 0 and math.isfinite(self.eta2)):
            raise InvalidConfig(f"single-shot variance must be positive, got {self.eta2}")

    def variance(self, n_shots: int) -> float:
        return self.eta2 / n_shots


class _GroupReadout:
    """Per-group basis change and eigenvalue tables for bitstring sampling."""

    def __init__(self, H: Hamiltonian):
        Q = H.n_qubits
        bits = (np.arange(2 ** Q)[:, None] >> (Q - 1 - np.arange(Q))[None, :]) & 1
        parity_sign = 1 - 2 * bits   # (2^Q, Q)
        self.bases: list[str] = []
        self.values: list[np.ndarray] = []
        for g, members in enumerate(H.groups):
            self.bases.append(H.group_basis(g))
            table = np.zeros(2 ** Q)
            for i in members:
                t = H.terms[i]
                table += t.coefficient * np.prod(parity_sign[:, list(t.support)], axis=1)
            self.values.append(table)

    def sample(self, amplitudes: np.ndarray, n_shots: int, rng: np.random.Generator) -> float:
        Q = int(amplitudes.size).bit_length() - 1
        total = 0.0
        for basis, table in zip(self.bases, self.values):
            tensor = amplitudes.reshape((2,) * Q)
            for q, ch in enumerate(basis):
                if ch in _BASIS_CHANGE:
                    tensor = apply_1q(tensor, _BASIS_CHANGE[ch], q)
            probs = np.abs(tensor.reshape(-1)) ** 2
            probs = probs / probs.sum()
            counts = rng.multinomial(n_shots, probs)
            total += float(counts @ table) / n_shots
        return total


def observe(
    circuit: ParamCircuit,
    H: Hamiltonian,
    x,
    n_shots: int,
    noise: NoiseModel,
    rng: np.random.Generator,
    _readout: _GroupReadout | None = None,
) -> tuple[float, float]:
    """
    One noisy energy observation at x with n_shots per operator group.
    The returned variance is always eta2 / n_shots, the GP's working assumption.
    """
    if int(n_shots) != n_shots or n_shots < 1:
        raise InvalidConfig(f"n_shots must be a positive integer, got {n_shots}")
    n_shots = int(n_shots)
    psi = prepare_state(circuit, x)
    var = noise.variance(n_shots)
    if noise.kind == "gaussian-exact":
        y = exact_energy(H, psi) + rng.normal(0.0, math.sqrt(var))
    else:
        readout = _readout or _GroupReadout(H)
        y = readout.sample(psi.amplitudes, n_shots, rng)
    return float(y), float(var)


@dataclass
class ObservationChannel:
    """The observe-channel handed to the optimizers; tallies shots per operator group."""
    circuit: ParamCircuit
    hamiltonian: Hamiltonian
    noise: NoiseModel
    rng: np.random.Generator
    shots_used: int = 0
    n_calls: int = 0
    _readout: _GroupReadout | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.noise.kind == "sampled":
            self._readout = _GroupReadout(self.hamiltonian)

    @property
    def eta2(self) -> float:
        return self.noise.eta2

    def __call__(self, x, n_shots: int) -> tuple[float, float]:
        y, var = observe(self.circuit, self.hamiltonian, x, n_shots, self.noise, self.rng,
                         _readout=self._readout)
        self.shots_used += int(n_shots)
        self.n_calls += 1
        return y, var
