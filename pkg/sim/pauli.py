# -*- coding: utf-8 -*-
"""
Pauli-string Hamiltonians: construction, measurement grouping, exact
energies and ground truth by dense diagonalization.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sparse

from errors import ConsistencyError, InvalidConfig, InvalidInput, UnsupportedScale
from sim.state import PAULI_MATRICES, QuantumState, apply_pauli

MAX_DENSE_DIM = 4096
_AXES = ("X", "Y", "Z")


@dataclass(frozen=True)
class PauliTerm:
    coefficient: float
    letters: str

    def __post_init__(self):
        c = float(self.coefficient)
        if not math.isfinite(c) or c == 0.0:
            raise InvalidInput(f"Pauli coefficient must be finite and nonzero, got {self.coefficient}")
        if not self.letters or any(ch not in "IXYZ" for ch in self.letters):
            raise InvalidInput(f"bad Pauli string {self.letters!r}")
        object.__setattr__(self, "coefficient", c)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q, ch in enumerate(self.letters) if ch != "I")


def qubitwise_compatible(a: str, b: str) -> bool:
    return all(x == "I" or y == "I" or x == y for x, y in zip(a, b))


def group_qubitwise(terms: Sequence[PauliTerm]) -> tuple[tuple[int, ...], ...]:
    """Greedy first-fit partition into qubit-wise commuting groups."""
    groups: list[list[int]] = []
    bases: list[list[str]] = []
    for i, term in enumerate(terms):
        for g, basis in enumerate(bases):
            if qubitwise_compatible("".join(basis), term.letters):
                groups[g].append(i)
                for q, ch in enumerate(term.letters):
                    if ch != "I":
                        basis[q] = ch
                break
        else:
            groups.append([i])
            bases.append(list(term.letters))
    return tuple(tuple(g) for g in groups)


@dataclass(frozen=True)
class Hamiltonian:
    n_qubits: int
    terms: tuple[PauliTerm, ...]
    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidInput("Hamiltonian needs at least one qubit")
        for t in self.terms:
            if len(t.letters) != self.n_qubits:
                raise InvalidInput(f"term {t.letters!r} does not act on {self.n_qubits} qubits")
        seen = sorted(i for g in self.groups for i in g)
        if seen != list(range(len(self.terms))):
            raise InvalidInput("measurement groups must partition the term indices")
        for g in self.groups:
            for i in g:
                for j in g:
                    if not qubitwise_compatible(self.terms[i].letters, self.terms[j].letters):
                        raise InvalidInput(f"terms {i} and {j} share a group but do not commute qubit-wise")

    @classmethod
    def from_terms(cls, n_qubits: int, terms: Sequence[PauliTerm]) -> "Hamiltonian":
        terms = tuple(terms)
        return cls(n_qubits=n_qubits, terms=terms, groups=group_qubitwise(terms))

    @property
    def coefficient_norm(self) -> float:
        return float(sum(abs(t.coefficient) for t in self.terms))

    def group_basis(self, g: int) -> str:
        """Measurement basis letter per qubit for group g ('I' where unmeasured)."""
        basis = ["I"] * self.n_qubits
        for i in self.groups[g]:
            for q, ch in enumerate(self.terms[i].letters):
                if ch != "I":
                    basis[q] = ch
        return "".join(basis)


def build_heisenberg(n_qubits: int, J: Sequence[float], h: Sequence[float], pbc: bool = False) -> Hamiltonian:
    """
    H = -sum_i [ sum_j J_i s^i_j s^i_{j+1} + sum_j h_i s^i_j ] on an open chain.
    Zero couplings are dropped.
    """
    if pbc:
        raise InvalidConfig("periodic boundary conditions are not supported (open chain only)")
    if n_qubits < 2:
        raise InvalidConfig(f"Heisenberg chain needs Q >= 2, got {n_qubits}")
    if len(J) != 3 or len(h) != 3:
        raise InvalidConfig("J and h must each have three components (X, Y, Z)")
    terms: list[PauliTerm] = []
    for axis, j_i, h_i in zip(_AXES, J, h):
        if j_i != 0:
            for q in range(n_qubits - 1):
                letters = ["I"] * n_qubits
                letters[q] = letters[q + 1] = axis
                terms.append(PauliTerm(-float(j_i), "".join(letters)))
        if h_i != 0:
            for q in range(n_qubits):
                letters = ["I"] * n_qubits
                letters[q] = axis
                terms.append(PauliTerm(-float(h_i), "".join(letters)))
    return Hamiltonian.from_terms(n_qubits, terms)


def ising_critical(n_qubits: int) -> Hamiltonian:
    return build_heisenberg(n_qubits, J=(-1.0, 0.0, 0.0), h=(0.0, 0.0, -1.0))


def pauli_matrix(letters: str) -> sparse.csr_matrix:
    out = sparse.csr_matrix(np.ones((1, 1), dtype=complex))
    for ch in letters:
        out = sparse.kron(out, sparse.csr_matrix(PAULI_MATRICES[ch]), format="csr")
    return out


def hamiltonian_matrix(H: Hamiltonian) -> sparse.csr_matrix:
    dim = 2 ** H.n_qubits
    M = sparse.csr_matrix((dim, dim), dtype=complex)
    for t in H.terms:
        M = M + t.coefficient * pauli_matrix(t.letters)
    return M


def _check_dims(H: Hamiltonian, psi: QuantumState):
    if psi.n_qubits != H.n_qubits:
        raise InvalidInput(f"state has {psi.n_qubits} qubits, Hamiltonian has {H.n_qubits}")


def expectation(H: Hamiltonian, psi: QuantumState) -> complex:
    """<psi|H|psi> term by term, without building the matrix."""
    _check_dims(H, psi)
    value = 0.0 + 0.0j
    for t in H.terms:
        value += t.coefficient * np.vdot(psi.amplitudes, apply_pauli(psi.amplitudes, t.letters))
    return complex(value)


def exact_energy(H: Hamiltonian, psi: QuantumState) -> float:
    value = expectation(H, psi)
    if abs(value.imag) > 1e-8:
        raise ConsistencyError(f"energy has imaginary part {value.imag:.3e}")
    return float(value.real)


def ground_truth(H: Hamiltonian) -> tuple[float, QuantumState]:
    dim = 2 ** H.n_qubits
    if dim > MAX_DENSE_DIM:
        raise UnsupportedScale(f"dense diagonalization limited to dimension {MAX_DENSE_DIM}, got {dim}")
    M = hamiltonian_matrix(H).toarray()
    w, v = scipy.linalg.eigh(M, subset_by_index=[0, 0])
    return float(w[0]), QuantumState.from_vector(v[:, 0])


def group_operator_apply(H: Hamiltonian, g: int, amplitudes: np.ndarray) -> np.ndarray:
    out = np.zeros_like(amplitudes, dtype=complex)
    for i in H.groups[g]:
        t = H.terms[i]
        out += t.coefficient * apply_pauli(amplitudes, t.letters)
    return out


def estimate_single_shot_variance(H: Hamiltonian, psi: QuantumState) -> float:
    """
    Variance of an energy estimate built from one shot per measurement group:
    sum over groups of <G^2> - <G>^2.
    """
    _check_dims(H, psi)
    total = 0.0
    for g in range(len(H.groups)):
        g_psi = group_operator_apply(H, g, psi.amplitudes)
        second = float(np.vdot(g_psi, g_psi).real)
        first = float(np.vdot(psi.amplitudes, g_psi).real)
        total += max(second - first * first, 0.0)
    return total
