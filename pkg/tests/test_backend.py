"""Compressed <-> physical representation round trips and dual execution."""

import numpy as np
import pytest

from fermiqec.backend import compress, decompress, random_h_circuit, run_dual
from fermiqec.codes import RepetitionCode
from fermiqec.qec import QecRound
from fermiqec.reference import apply_c, random_h_state
from fermiqec.registers import RegisterLayout
from fermiqec.states import basis_state, difference_norm

LAY = RegisterLayout(3, 4, 4, num_ancilla_qubits=2)


def test_round_trip_is_lossless():
    rng = np.random.default_rng(61)
    psi = random_h_state(LAY, rng, ancilla_label=0b10)
    assert difference_norm(decompress(compress(psi)), psi) == 0.0
    small = compress(psi)
    assert difference_norm(compress(decompress(small)), small) == 0.0


def test_compress_rejects_inconsistent_states():
    # one atom in the system but a full reference bank: too many atoms
    bad = basis_state(LAY, 0b001 | (0b1111 << 3))
    with pytest.raises(ValueError):
        compress(bad)


def test_annihilation_commutes_with_compression():
    rng = np.random.default_rng(62)
    psi = random_h_state(LAY, rng)
    for mode in range(LAY.num_system_modes):
        a = compress(apply_c(psi, mode))
        b = apply_c(compress(psi), mode)
        assert difference_norm(a, b) < 1e-13


def test_random_circuit_shape():
    lay = RegisterLayout(3, 5, 4, num_ancilla_qubits=2)
    ops = random_h_circuit(lay, np.random.default_rng(63), length=50)
    assert len(ops) == 50
    assert sum(isinstance(op, QecRound) for op in ops) == 1


def test_dual_run_agrees_and_reports_outcomes():
    lay = RegisterLayout(3, 5, 4, num_ancilla_qubits=2)
    code = RepetitionCode(lay)
    rng = np.random.default_rng(64)
    initial = random_h_state(lay, rng)
    ops = random_h_circuit(lay, rng, length=30)
    report = run_dual(initial, ops, seed=99, code=code)
    assert report.deviation < 1e-10
    assert report.outcomes_match
    assert len(report.outcomes_physical) == len(report.outcomes_compressed)
    assert not report.final_compressed.is_zero()
    assert report.final_physical.norm_sq() == pytest.approx(1.0, abs=1e-9)


def test_dual_run_insists_on_a_physical_start():
    rng = np.random.default_rng(65)
    initial = compress(random_h_state(LAY, rng))
    with pytest.raises(ValueError):
        run_dual(initial, [], seed=1)