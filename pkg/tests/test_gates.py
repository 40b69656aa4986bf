"""Site-level gate behavior: explicit matrix elements on small registers."""

import math

import numpy as np
import pytest

from fermiqec.gates import (
    apply_annihilation,
    apply_creation,
    apply_density_phase,
    apply_fswap,
    apply_local_phase,
    apply_qubit_gate,
    apply_tunneling,
    measure_mode_number,
    measure_qubit,
    number_expectation,
)
from fermiqec.registers import RegisterLayout
from fermiqec.states import add_states, basis_state, difference_norm, random_full_state

LAY = RegisterLayout(3, 3, 3)


class CountingRng:
    """Wraps a Generator and counts uniform draws."""

    def __init__(self, seed):
        self._rng = np.random.default_rng(seed)
        self.draws = 0

    def random(self):
        self.draws += 1
        return self._rng.random()


def test_local_phase_only_touches_occupied():
    psi = add_states(basis_state(LAY, 0b000), basis_state(LAY, 0b001))
    out = apply_local_phase(psi, 0, 0.7)
    assert out.entries[0b000] == psi.entries[0b000]
    assert out.entries[0b001] == pytest.approx(psi.entries[0b001] * np.exp(0.7j))


def test_density_phase_needs_double_occupation():
    psi = add_states(basis_state(LAY, 0b011), basis_state(LAY, 0b001))
    out = apply_density_phase(psi, 0, 1, 1.1)
    assert out.entries[0b001] == psi.entries[0b001]
    assert out.entries[0b011] == pytest.approx(psi.entries[0b011] * np.exp(1.1j))


def test_tunneling_rotation_on_single_particle():
    theta = 0.4
    psi = basis_state(LAY, 0b001)
    out = apply_tunneling(psi, 0, 1, theta)
    # e^(i theta (s0† s1 + s1† s0)) rotates within the two-level pair
    assert out.entries[0b001] == pytest.approx(math.cos(theta))
    assert out.entries[0b010] == pytest.approx(1j * math.sin(theta))
    assert abs(out.norm() - 1.0) < 1e-14


def test_tunneling_is_unitary_and_inverse():
    rng = np.random.default_rng(11)
    psi = random_full_state(LAY, rng)
    out = apply_tunneling(apply_tunneling(psi, 0, 2, 0.9), 0, 2, -0.9)
    assert difference_norm(out, psi) < 1e-13


def test_fswap_exchanges_and_signs_double_occupation():
    single = basis_state(LAY, 0b001)
    assert list(apply_fswap(single, 0, 1).entries) == [0b010]
    double = basis_state(LAY, 0b011)
    out = apply_fswap(double, 0, 1)
    assert out.entries[0b011] == -1.0  # both occupied: fermionic minus sign
    empty = basis_state(LAY, 0b100)
    assert apply_fswap(empty, 0, 1).entries[0b100] == 1.0


def test_ladder_operators_anticommute_across_modes():
    rng = np.random.default_rng(12)
    psi = random_full_state(LAY, rng)
    anti = add_states(
        apply_creation(apply_annihilation(psi, 0), 2),
        apply_annihilation(apply_creation(psi, 2), 0),
    )
    assert anti.norm() < 1e-13


def test_number_expectation():
    psi = add_states(basis_state(LAY, 0b001), basis_state(LAY, 0b010), 0.6, 0.8)
    assert number_expectation(psi, 0) == pytest.approx(0.36)
    assert number_expectation(psi, 1) == pytest.approx(0.64)
    assert number_expectation(psi, 2) == 0.0


def test_qubit_gate_algebra():
    lay = RegisterLayout(3, 3, 3, num_ancilla_qubits=1)
    psi = basis_state(lay, 0)
    plus = apply_qubit_gate(psi, "h", 0)
    assert apply_qubit_gate(plus, "h", 0).fidelity(psi) == pytest.approx(1.0)
    # s . s = z on the ancilla
    via_s = apply_qubit_gate(apply_qubit_gate(plus, "s", 0), "s", 0)
    via_z = apply_qubit_gate(plus, "z", 0)
    assert difference_norm(via_s, via_z) < 1e-15


def test_measure_qubit_single_draw_and_renormalization():
    lay = RegisterLayout(3, 3, 3, num_ancilla_qubits=1)
    plus = apply_qubit_gate(basis_state(lay, 0), "h", 0)
    for seed in range(8):
        rng = CountingRng(seed)
        outcome, post = measure_qubit(plus, 0, rng)
        assert rng.draws == 1
        assert outcome in (+1, -1)
        assert abs(post.norm() - 1.0) < 1e-14
        bit = 1 << lay.ancilla_bit(0)
        want = 0 if outcome == +1 else bit
        assert all(l & bit == want for l in post.entries)


def test_measure_qubit_y_basis_definite_state():
    lay = RegisterLayout(3, 3, 3, num_ancilla_qubits=1)
    # |+i> = S H |0>: a y measurement must give +1 with certainty
    psi = apply_qubit_gate(apply_qubit_gate(basis_state(lay, 0), "h", 0), "s", 0)
    for seed in range(16):
        outcome, _ = measure_qubit(psi, 0, np.random.default_rng(seed), basis="y")
        assert outcome == +1


def test_measure_mode_number_collapses_count():
    rng = CountingRng(3)
    psi = add_states(basis_state(LAY, 0b001), basis_state(LAY, 0b011))
    count, post = measure_mode_number(psi, (0, 1, 2), rng)
    assert rng.draws == 1
    assert count in (1, 2)
    assert abs(post.norm() - 1.0) < 1e-14
    assert all(bin(l & 0b111).count("1") == count for l in post.entries)


def test_measure_mode_number_definite_count_is_deterministic():
    psi = basis_state(LAY, 0b011)
    for seed in range(5):
        count, post = measure_mode_number(psi, (0, 1, 2), np.random.default_rng(seed))
        assert count == 2
        assert post.fidelity(psi) == pytest.approx(1.0)
