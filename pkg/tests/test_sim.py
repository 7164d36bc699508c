# -*- coding: utf-8 -*-
from __future__ import annotations

import math

import numpy as np
import pytest

from errors import InvalidConfig, InvalidInput, UnsupportedScale
from gp.trig import fit_trig_1d
from gp.theory import equidistant_shifts
from sim import (
    Hamiltonian, NoiseModel, ObservationChannel, ParamCircuit, PauliTerm, QuantumState,
    build_efficient_su2, build_heisenberg, estimate_single_shot_variance, exact_energy,
    expectation, fidelity, ground_truth, hamiltonian_matrix, ising_critical, observe, prepare_state, rotation,
)
from sim.pauli import MAX_DENSE_DIM


# ---------------- circuits ----------------
@pytest.mark.parametrize("Q, L, D, n_cx", [(5, 3, 40, 12), (2, 0, 4, 0), (3, 1, 12, 2)])
def test_efficient_su2_shape(Q, L, D, n_cx):
    c = build_efficient_su2(Q, L)
    assert c.n_params == D
    assert c.n_entanglers == n_cx
    assert np.all(c.vd == 1)


@pytest.mark.parametrize("Q, L", [(1, 2), (3, -1)])
def test_efficient_su2_rejects_bad_shape(Q, L):
    with pytest.raises(InvalidConfig):
        build_efficient_su2(Q, L)


def test_zero_angles_prepare_all_zero_state():
    c = build_efficient_su2(3, 2)
    psi = prepare_state(c, np.zeros(c.n_params))
    assert abs(psi.amplitudes[0]) == pytest.approx(1.0, abs=1e-12)


def test_single_qubit_ry_pi_flips():
    c = ParamCircuit(n_qubits=1, n_params=1, gates=(rotation("Y", (0,), 0),))
    psi = prepare_state(c, [math.pi])
    assert np.allclose(np.abs(psi.amplitudes), [0.0, 1.0], atol=1e-12)


def test_prepare_state_rejects_wrong_length():
    c = build_efficient_su2(2, 1)
    with pytest.raises(InvalidInput):
        prepare_state(c, np.zeros(c.n_params + 1))


def test_prepared_states_are_normalized(rng):
    c = build_efficient_su2(4, 2)
    for _ in range(5):
        psi = prepare_state(c, rng.uniform(0, 2 * np.pi, c.n_params))
        assert np.vdot(psi.amplitudes, psi.amplitudes).real == pytest.approx(1.0, abs=1e-12)


def test_energy_is_first_order_trig_along_each_axis(rng):
    H = ising_critical(3)
    c = build_efficient_su2(3, 1)
    x = rng.uniform(0, 2 * np.pi, c.n_params)
    shifts = equidistant_shifts(1)
    for axis in (0, 5, 11):
        def f(theta):
            z = x.copy()
            z[axis] += theta
            return exact_energy(H, prepare_state(c, z))
        poly = fit_trig_1d(shifts, [f(s) for s in shifts])
        query = rng.uniform(0, 2 * np.pi, 20)
        assert np.allclose(poly(query), [f(s) for s in query], atol=1e-10)


# ---------------- Hamiltonians ----------------
def test_ising_q5_terms():
    H = ising_critical(5)
    assert len(H.terms) == 9
    xx = [t for t in H.terms if t.letters.count("X") == 2]
    z = [t for t in H.terms if t.letters.count("Z") == 1]
    assert len(xx) == 4 and len(z) == 5
    assert all(t.coefficient == 1.0 for t in H.terms)


def test_ising_q2_grouping(ising2):
    assert [t.letters for t in ising2.terms] == ["XX", "ZI", "IZ"]
    assert ising2.groups == ((0,), (1, 2))


def test_zero_couplings_give_empty_hamiltonian():
    H = build_heisenberg(3, (0.0, 0.0, 0.0), (0.0, 0.0, 0.0))
    assert H.terms == () and H.groups == ()
    assert exact_energy(H, QuantumState.zero(3)) == 0.0


def test_heisenberg_rejects_pbc_and_single_qubit():
    with pytest.raises(InvalidConfig):
        build_heisenberg(4, (1, 1, 1), (0, 0, 0), pbc=True)
    with pytest.raises(InvalidConfig):
        build_heisenberg(1, (1, 1, 1), (0, 0, 0))


def test_hamiltonian_matrix_is_hermitian():
    M = hamiltonian_matrix(build_heisenberg(3, (1.0, 0.5, -0.3), (0.2, 0.0, 1.0))).toarray()
    assert np.allclose(M, M.conj().T)


def test_energy_of_zero_state(ising2):
    assert exact_energy(ising2, QuantumState.zero(2)) == pytest.approx(2.0)


def test_ground_truth_q2(ising2):
    e, psi = ground_truth(ising2)
    assert e == pytest.approx(-math.sqrt(5.0), abs=1e-12)
    assert exact_energy(ising2, psi) == pytest.approx(e, abs=1e-12)


def test_ground_truth_single_qubit():
    H = Hamiltonian.from_terms(1, [PauliTerm(-1.0, "Z")])
    e, psi = ground_truth(H)
    assert e == pytest.approx(-1.0)
    assert fidelity(psi, QuantumState.zero(1)) == pytest.approx(1.0)


def test_ground_truth_matches_dense_eigensolver():
    H = ising_critical(5)
    e, _ = ground_truth(H)
    assert e == pytest.approx(np.linalg.eigvalsh(hamiltonian_matrix(H).toarray())[0], abs=1e-10)


def test_ground_truth_refuses_large_systems():
    Q = int(math.log2(MAX_DENSE_DIM)) + 1
    with pytest.raises(UnsupportedScale):
        ground_truth(ising_critical(Q))


def test_variational_bound(rng):
    H = ising_critical(3)
    e_gs, _ = ground_truth(H)
    c = build_efficient_su2(3, 1)
    for _ in range(10):
        psi = prepare_state(c, rng.uniform(0, 2 * np.pi, c.n_params))
        assert exact_energy(H, psi) >= e_gs - 1e-12


def test_fidelity_cases():
    zero = QuantumState.zero(1)
    one = QuantumState.from_vector([0, 1])
    plus = QuantumState.from_vector([1, 1])
    assert fidelity(zero, zero) == pytest.approx(1.0)
    assert fidelity(zero, one) == pytest.approx(0.0)
    assert fidelity(zero, plus) == pytest.approx(1 / math.sqrt(2))
    assert fidelity(zero, QuantumState(1j * zero.amplitudes)) == pytest.approx(1.0)


def test_single_shot_variance():
    Z = Hamiltonian.from_terms(1, [PauliTerm(1.0, "Z")])
    assert estimate_single_shot_variance(Z, QuantumState.from_vector([1, 1])) == pytest.approx(1.0)
    assert estimate_single_shot_variance(ising_critical(2), QuantumState.zero(2)) == pytest.approx(1.0)
    fields_only = build_heisenberg(2, (0, 0, 0), (0, 0, -1))
    assert estimate_single_shot_variance(fields_only, QuantumState.zero(2)) == pytest.approx(0.0)


# ---------------- observation channel ----------------
def test_observe_is_deterministic_per_seed(ising2):
    c = build_efficient_su2(2, 1)
    x = np.linspace(0.1, 2.0, c.n_params)
    noise = NoiseModel("gaussian-exact", eta2=1.0)
    a = observe(c, ising2, x, 100, noise, np.random.default_rng(7))
    b = observe(c, ising2, x, 100, noise, np.random.default_rng(7))
    assert a == b
    assert a[1] == pytest.approx(0.01)


def test_observe_rejects_zero_shots(ising2):
    c = build_efficient_su2(2, 0)
    with pytest.raises(InvalidConfig):
        observe(c, ising2, np.zeros(c.n_params), 0, NoiseModel(), np.random.default_rng(0))


def test_sampled_readout_on_zero_state(ising2):
    c = build_efficient_su2(2, 0)
    y, var = observe(c, ising2, np.zeros(c.n_params), 10 ** 6, NoiseModel("sampled", 1.0),
                     np.random.default_rng(3))
    # Z group is exactly 2, the XX group averages +-1 outcomes
    assert y == pytest.approx(2.0, abs=0.01)
    assert var == pytest.approx(1e-6)


def test_sampled_readout_is_unbiased(rng):
    H = ising_critical(3)
    c = build_efficient_su2(3, 1)
    x = rng.uniform(0, 2 * np.pi, c.n_params)
    psi = prepare_state(c, x)
    eta2 = estimate_single_shot_variance(H, psi)
    n = 10 ** 5
    y, _ = observe(c, H, x, n, NoiseModel("sampled", 1.0), np.random.default_rng(11))
    assert abs(y - exact_energy(H, psi)) <= 5 * math.sqrt(eta2 / n) + 1e-12


def test_channel_counts_shots(ising2):
    c = build_efficient_su2(2, 0)
    ch = ObservationChannel(c, ising2, NoiseModel(eta2=0.5), np.random.default_rng(0))
    ch(np.zeros(c.n_params), 10)
    ch(np.zeros(c.n_params), 5)
    assert ch.shots_used == 15 and ch.n_calls == 2
    assert ch.eta2 == 0.5


def test_expectation_matches_dense_matrix(rng):
    H = build_heisenberg(3, (1.0, 0.5, -0.3), (0.2, 0.0, 1.0))
    psi = QuantumState.from_vector(rng.normal(size=8) + 1j * rng.normal(size=8))
    dense = np.vdot(psi.amplitudes, hamiltonian_matrix(H) @ psi.amplitudes)
    assert expectation(H, psi) == pytest.approx(dense, abs=1e-12)
    assert abs(expectation(H, psi).imag) < 1e-12
