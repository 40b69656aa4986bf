"""Logical gates on repetition-code blocks.

The logical occupation of a block is its parity, so logical phase-type gates
are diagonal and can be teleported onto an ancilla with parity-controlled
sign flips; the logical tunneling at pi/2 reduces to a transversal fermionic
swap plus two logical S gates.  Exact diagonal oracles live alongside the
gadget constructions so the two can be checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .codes import RepetitionCode, block_parity
from .gates import apply_controlled, apply_fswap, apply_qubit_gate
from .states import SparseState, add_states, phase_factor

__all__ = [
    "FSwapL",
    "PhaseL",
    "DensityL",
    "TunnelL",
    "ControlledTunnelL",
    "fswap_logical",
    "logical_phase_exact",
    "logical_density_exact",
    "phase_gadget_logical",
    "density_gadget_logical",
    "tunneling_logical",
    "controlled_tunneling_logical",
]


# ---------------------------------------------------------------------------
# circuit instruction records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FSwapL:
    block_a: int
    block_b: int


@dataclass(frozen=True)
class PhaseL:
    """exp(i theta N_block) via the ancilla gadget."""

    block: int
    theta: float
    ancilla: int = 0


@dataclass(frozen=True)
class DensityL:
    """exp(i theta N_a N_b) via two ancillas."""

    block_a: int
    block_b: int
    theta: float
    ancilla_a: int = 0
    ancilla_b: int = 1


@dataclass(frozen=True)
class TunnelL:
    block_a: int
    block_b: int
    theta: float
    method: str = "exact"
    ancilla: int = 0


@dataclass(frozen=True)
class ControlledTunnelL:
    qubit: int
    block_a: int
    block_b: int
    theta: float
    method: str = "exact"
    ancilla: int = 1


# ---------------------------------------------------------------------------
# transversal swap and diagonal oracles
# ---------------------------------------------------------------------------


def fswap_logical(
    state: SparseState, code: RepetitionCode, block_a: int, block_b: int
) -> SparseState:
    """Transversal fermionic swap of two blocks (mode k with mode k)."""
    if block_a == block_b:
        raise ValueError("logical fswap needs two distinct blocks")
    if state.compressed:
        perm, sign = code.compiled_fswap(block_a, block_b)
        smask = state.layout.system_mask
        out = {}
        for l, a in state.entries.items():
            sys = l & smask
            out[perm[sys] | (l & ~smask)] = a if sign[sys] > 0 else -a
        return state.with_entries(out)
    modes_a = code.block_modes(block_a)
    modes_b = code.block_modes(block_b)
    for ma, mb in zip(modes_a, modes_b):
        state = apply_fswap(state, ma, mb)
    return state


def logical_phase_exact(
    state: SparseState, code: RepetitionCode, block: int, theta: float
) -> SparseState:
    """Diagonal oracle for exp(i theta N_block)."""
    ph = phase_factor(theta)
    return state.with_entries(
        {
            l: (a * ph if block_parity(code, l, block) else a)
            for l, a in state.entries.items()
        }
    )


def logical_density_exact(
    state: SparseState,
    code: RepetitionCode,
    block_a: int,
    block_b: int,
    theta: float,
) -> SparseState:
    """Diagonal oracle for exp(i theta N_a N_b)."""
    ph = phase_factor(theta)
    return state.with_entries(
        {
            l: (
                a * ph
                if block_parity(code, l, block_a) and block_parity(code, l, block_b)
                else a
            )
            for l, a in state.entries.items()
        }
    )


# ---------------------------------------------------------------------------
# ancilla gadgets
# ---------------------------------------------------------------------------


def _controlled_block_z(
    state: SparseState, code: RepetitionCode, block: int, ancilla: int
) -> SparseState:
    """(-1)^(block parity) on the |1> branch of an ancilla."""
    bit = 1 << state.layout.ancilla_bit(ancilla, compressed=state.compressed)
    mask = code.block_mask(block)
    return state.with_entries(
        {
            l: (-a if (l & bit) and (l & mask).bit_count() & 1 else a)
            for l, a in state.entries.items()
        }
    )


def phase_gadget_logical(
    state: SparseState,
    code: RepetitionCode,
    block: int,
    theta: float,
    ancilla: int = 0,
) -> SparseState:
    """exp(i theta N_block) without touching the block directly.

    The Hadamard / parity-kickback sandwich copies the block parity onto the
    ancilla, a plain qubit phase imprints theta, and the mirrored sandwich
    returns the ancilla to |0>.
    """
    state = apply_qubit_gate(state, "h", ancilla)
    state = _controlled_block_z(state, code, block, ancilla)
    state = apply_qubit_gate(state, "h", ancilla)
    state = apply_qubit_gate(state, "phase", ancilla, theta=theta)
    state = apply_qubit_gate(state, "h", ancilla)
    state = _controlled_block_z(state, code, block, ancilla)
    state = apply_qubit_gate(state, "h", ancilla)
    return state


def density_gadget_logical(
    state: SparseState,
    code: RepetitionCode,
    block_a: int,
    block_b: int,
    theta: float,
    ancilla_a: int = 0,
    ancilla_b: int = 1,
) -> SparseState:
    """exp(i theta N_a N_b): copy both parities onto ancillas, apply the
    two-qubit controlled phase, then uncompute."""
    if ancilla_a == ancilla_b:
        raise ValueError("density gadget needs two distinct ancillas")
    state = apply_qubit_gate(state, "h", ancilla_a)
    state = _controlled_block_z(state, code, block_a, ancilla_a)
    state = apply_qubit_gate(state, "h", ancilla_a)
    state = apply_qubit_gate(state, "h", ancilla_b)
    state = _controlled_block_z(state, code, block_b, ancilla_b)
    state = apply_qubit_gate(state, "h", ancilla_b)
    state = apply_qubit_gate(state, "cphase", ancilla_a, ancilla_b, theta)
    state = apply_qubit_gate(state, "h", ancilla_a)
    state = _controlled_block_z(state, code, block_a, ancilla_a)
    state = apply_qubit_gate(state, "h", ancilla_a)
    state = apply_qubit_gate(state, "h", ancilla_b)
    state = _controlled_block_z(state, code, block_b, ancilla_b)
    state = apply_qubit_gate(state, "h", ancilla_b)
    return state


# ---------------------------------------------------------------------------
# logical tunneling
# ---------------------------------------------------------------------------


def tunneling_logical(
    state: SparseState,
    code: RepetitionCode,
    block_a: int,
    block_b: int,
    theta: float,
    method: str = "exact",
    ancilla: int = 0,
) -> SparseState:
    """exp(i theta (C_a^dag C_b + h.c.)).

    The generator vanishes on even joint parity and squares to one on odd,
    where the transversal swap acts as the hop; the exact route splits the
    state along that parity.  The hardware route (theta = pi/2 only) is the
    transversal swap followed by logical S gates on both blocks.
    """
    if method == "exact":
        odd: dict[int, complex] = {}
        even: dict[int, complex] = {}
        for l, a in state.entries.items():
            par = block_parity(code, l, block_a) ^ block_parity(code, l, block_b)
            (odd if par else even)[l] = a
        out = dict(even)
        c, s = math.cos(theta), math.sin(theta)
        swapped = fswap_logical(
            SparseState(state.layout, odd, state.compressed), code, block_a, block_b
        )
        for l, a in odd.items():
            out[l] = out.get(l, 0.0) + c * a
        for l, a in swapped.entries.items():
            out[l] = out.get(l, 0.0) + 1j * s * a
        return state.with_entries(out)

    if method == "hardware":
        if not math.isclose(theta, math.pi / 2, abs_tol=1e-12):
            raise ValueError("the hardware route implements theta = pi/2 only")
        state = fswap_logical(state, code, block_a, block_b)
        state = phase_gadget_logical(state, code, block_a, math.pi / 2, ancilla)
        state = phase_gadget_logical(state, code, block_b, math.pi / 2, ancilla)
        return state

    raise ValueError(f"unknown tunneling method {method!r}")


def controlled_tunneling_logical(
    state: SparseState,
    qubit: int,
    code: RepetitionCode,
    block_a: int,
    block_b: int,
    theta: float,
    method: str = "exact",
    ancilla: int = 1,
) -> SparseState:
    """Logical tunneling on the |1> branch of a control qubit."""
    if method == "hardware" and ancilla == qubit:
        raise ValueError("gadget ancilla must differ from the control qubit")
    return apply_controlled(
        state,
        qubit,
        lambda s: tunneling_logical(s, code, block_a, block_b, theta, method, ancilla),
    )
