# -*- coding: utf-8 -*-
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from errors import InvalidConfig, InvalidInput
from sim.state import PAULI_MATRICES, QuantumState, apply_1q, apply_pauli

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Gate:
    kind: str                   # "rot" or "cx"
    qubits: tuple[int, ...]     # rot: target qubit(s); cx: (control, target)
    pauli: str = ""             # rot only, one letter per target qubit
    param: int = -1             # rot only

    def __repr__(self):
        if self.kind == "cx":
            return f"CX{self.qubits}"
        return f"R{self.pauli}{self.qubits}[x{self.param}]"


def rotation(pauli: str, qubits: Sequence[int], param: int) -> Gate:
    return Gate(kind="rot", qubits=tuple(qubits), pauli=pauli, param=int(param))


def cx(control: int, target: int) -> Gate:
    return Gate(kind="cx", qubits=(control, target))


@dataclass(frozen=True)
class ParamCircuit:
    n_qubits: int
    n_params: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        for g in self.gates:
            if any(q < 0 or q >= self.n_qubits for q in g.qubits):
                raise InvalidInput(f"{g!r} addresses a qubit outside [0, {self.n_qubits})")
            if g.kind == "rot":
                if not 0 <= g.param < self.n_params:
                    raise InvalidInput(f"{g!r} parameter index outside [0, {self.n_params})")
                if len(g.pauli) != len(g.qubits) or any(ch not in "XYZ" for ch in g.pauli):
                    raise InvalidInput(f"{g!r} has a malformed Pauli axis")
            elif g.kind == "cx":
                if len(g.qubits) != 2 or g.qubits[0] == g.qubits[1]:
                    raise InvalidInput(f"{g!r} needs two distinct qubits")
            else:
                raise InvalidInput(f"unknown gate kind {g.kind!r}")

    @property
    def vd(self) -> np.ndarray:
        """Number of rotation gates sharing each parameter."""
        idx = [g.param for g in self.gates if g.kind == "rot"]
        return np.bincount(np.asarray(idx, dtype=int), minlength=self.n_params)

    @property
    def n_entanglers(self) -> int:
        return sum(1 for g in self.gates if g.kind == "cx")


def build_efficient_su2(n_qubits: int, n_layers: int) -> ParamCircuit:
    """
    L+1 blocks of (RY on every qubit, then RZ on every qubit), each rotation
    with its own parameter, separated by CX ladders on (q, q+1).
    """
    if n_qubits < 2:
        raise InvalidConfig(f"esu2 needs at least 2 qubits, got {n_qubits}")
    if n_layers < 0:
        raise InvalidConfig(f"layer count must be >= 0, got {n_layers}")
    gates: list[Gate] = []
    p = 0
    for block in range(n_layers + 1):
        for axis in ("Y", "Z"):
            for q in range(n_qubits):
                gates.append(rotation(axis, (q,), p))
                p += 1
        if block < n_layers:
            for q in range(n_qubits - 1):
                gates.append(cx(q, q + 1))
    return ParamCircuit(n_qubits=n_qubits, n_params=p, gates=tuple(gates))


def wrap_angles(x) -> np.ndarray:
    return np.mod(np.asarray(x, dtype=float), TWO_PI)


def _apply_cx(tensor: np.ndarray, control: int, target: int) -> np.ndarray:
    out = tensor.copy()
    idx = [slice(None)] * tensor.ndim
    idx[control] = 1
    sub_target = target - 1 if target > control else target
    out[tuple(idx)] = np.flip(tensor[tuple(idx)], axis=sub_target)
    return out


def prepare_state(circuit: ParamCircuit, x) -> QuantumState:
    """G(x)|0...0>, a rotation by theta about P acting as cos(theta/2) I - i sin(theta/2) P."""
    x = wrap_angles(x)
    if x.shape != (circuit.n_params,):
        raise InvalidInput(f"expected {circuit.n_params} angles, got shape {x.shape}")
    Q = circuit.n_qubits
    tensor = np.zeros((2,) * Q, dtype=complex)
    tensor[(0,) * Q] = 1.0
    for g in circuit.gates:
        if g.kind == "cx":
            tensor = _apply_cx(tensor, *g.qubits)
            continue
        half = 0.5 * x[g.param]
        if len(g.qubits) == 1:
            U = np.cos(half) * PAULI_MATRICES["I"] - 1j * np.sin(half) * PAULI_MATRICES[g.pauli]
            tensor = apply_1q(tensor, U, g.qubits[0])
        else:
            letters = ["I"] * Q
            for q, ch in zip(g.qubits, g.pauli):
                letters[q] = ch
            flat = tensor.reshape(-1)
            flat = np.cos(half) * flat - 1j * np.sin(half) * apply_pauli(flat, "".join(letters))
            tensor = flat.reshape((2,) * Q)
    amps = tensor.reshape(-1)
    return QuantumState(amps / np.linalg.norm(amps))
