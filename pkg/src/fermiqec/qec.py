"""Syndrome extraction, decoding, and recovery for the repetition code.

Stabilizers are read out either through the hardware ancilla gadget
(Hadamard, two controlled pi/2 Majorana rotations split by S-dagger, then a
computational-basis measurement) or through direct projection.  Both consume
exactly one random draw per stabilizer with the same outcome orientation, so
runs agree draw-for-draw across the two methods and representations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codes import (
    RepetitionCode,
    apply_stabilizer,
    prepare_logical_vacuum,
    project_codespace,
    stabilizer_expectation,
)
from .gates import apply_local_phase, apply_qubit_gate, measure_mode_number, measure_qubit
from .reference import controlled_D
from .registers import RegisterLayout
from .states import SparseState, add_states

__all__ = [
    "QecRound",
    "SYNDROME_TABLE",
    "generate_syndrome_table",
    "decode",
    "measure_stabilizer",
    "qec_round",
    "measure_reference_and_recover",
]


@dataclass(frozen=True)
class QecRound:
    """Circuit instruction: one full round of syndrome extraction plus
    correction.  ``method=None`` lets the backend pick its native readout."""

    ancilla: int = 0
    method: str | None = None


#: Syndrome (s12, s23) -> block-local mode offset of the phase error, or
#: None for the clean syndrome.
SYNDROME_TABLE: dict[tuple[int, int], int | None] = {
    (+1, +1): None,
    (-1, +1): 0,
    (-1, -1): 1,
    (+1, -1): 2,
}


def generate_syndrome_table() -> dict[tuple[int, int], int | None]:
    """Brute-force the syndrome map on a one-block register by injecting
    each single-mode phase flip into the logical vacuum."""
    lay = RegisterLayout(3, 3, 3)
    code = RepetitionCode(lay)
    base = prepare_logical_vacuum(code)
    table: dict[tuple[int, int], int | None] = {}
    for offset in (None, 0, 1, 2):
        state = base if offset is None else apply_local_phase(base, offset, math.pi)
        syndrome = (
            round(stabilizer_expectation(state, code, 0, "s12")),
            round(stabilizer_expectation(state, code, 0, "s23")),
        )
        table[syndrome] = offset
    return table


def decode(syndrome: tuple[int, int]) -> int | None:
    try:
        return SYNDROME_TABLE[syndrome]
    except KeyError:
        raise ValueError(f"not a syndrome: {syndrome!r}") from None


# ---------------------------------------------------------------------------
# stabilizer readout
# ---------------------------------------------------------------------------


def _apply_stabilizer_fast(
    state: SparseState, code: RepetitionCode, block: int, which: str
) -> SparseState:
    """Stabilizer application, via the compiled label map when compressed."""
    if not state.compressed:
        return apply_stabilizer(state, code, block, which)
    perm, phase = code.compiled_stabilizer(which, block)
    smask = state.layout.system_mask
    out: dict[int, complex] = {}
    for l, a in state.entries.items():
        sys = l & smask
        ph = phase[sys]
        if ph == 0:
            continue
        # stabilizers square to one, so the label map is injective
        out[perm[sys] | (l & ~smask)] = ph * a
    return state.with_entries(out)


def _reset_ancilla(state: SparseState, qubit: int) -> SparseState:
    """Return the measured-out ancilla to |0> so it can be reused."""
    bit = 1 << state.layout.ancilla_bit(qubit, compressed=state.compressed)
    return state.with_entries({l & ~bit: a for l, a in state.entries.items()})


def measure_stabilizer(
    state: SparseState,
    code: RepetitionCode,
    block: int,
    which: str,
    rng: np.random.Generator,
    ancilla: int = 0,
    method: str = "gadget",
) -> tuple[int, SparseState]:
    """Measure one block stabilizer; exactly one rng draw either way.

    The gadget route entangles an ancilla via two controlled pi/2 Majorana
    rotations (higher mode first, split by S-dagger so the branch phases
    cancel), measures it, and resets it.  The projection route splits the
    state into the two eigencomponents directly.  Outcome +1 corresponds to
    the (1 + S)/2 branch in both.
    """
    m1, m2, m3 = code.block_modes(block)
    if which == "s12":
        hi, lo, kind = m2, m1, "x"
    elif which == "s23":
        hi, lo, kind = m3, m2, "y"
    else:
        raise ValueError(f"unknown stabilizer {which!r}")

    if method == "gadget":
        work = apply_qubit_gate(state, "h", ancilla)
        work = controlled_D(work, ancilla, hi, math.pi / 2, kind)
        work = apply_qubit_gate(work, "sdg", ancilla)
        work = controlled_D(work, ancilla, lo, math.pi / 2, kind)
        work = apply_qubit_gate(work, "h", ancilla)
        outcome, work = measure_qubit(work, ancilla, rng)
        return outcome, _reset_ancilla(work, ancilla)

    if method == "projection":
        if state.compressed:
            # fused (1 + S)/2 pass through the compiled label map
            perm, phase = code.compiled_stabilizer(which, block)
            smask = state.layout.system_mask
            plus_entries: dict[int, complex] = {}
            for l, a in state.entries.items():
                half = 0.5 * a
                plus_entries[l] = plus_entries.get(l, 0.0) + half
                sys = l & smask
                ph = phase[sys]
                if ph != 0:
                    new = perm[sys] | (l & ~smask)
                    plus_entries[new] = plus_entries.get(new, 0.0) + ph * half
            plus = state.with_entries(plus_entries)
        else:
            image = _apply_stabilizer_fast(state, code, block, which)
            plus = add_states(state, image, 0.5, 0.5)
        total = state.norm_sq()
        p_plus = plus.norm_sq() / total
        u = rng.random()
        if u < p_plus:
            scale = 1.0 / math.sqrt(p_plus * total)
            return 1, plus.with_entries(
                {l: a * scale for l, a in plus.entries.items()}
            )
        minus = add_states(state, plus, 1.0, -1.0)  # (1 - S)/2 = 1 - (1 + S)/2
        p_minus = minus.norm_sq() / total
        if p_minus <= 0.0:
            raise ValueError("selected a zero-probability branch")
        scale = 1.0 / math.sqrt(p_minus * total)
        return -1, minus.with_entries(
            {l: a * scale for l, a in minus.entries.items()}
        )

    raise ValueError(f"unknown readout method {method!r}")


def qec_round(
    state: SparseState,
    code: RepetitionCode,
    rng: np.random.Generator,
    ancilla: int = 0,
    method: str = "gadget",
) -> tuple[SparseState, list[tuple[int, int]]]:
    """One round: per block, read both stabilizers, decode, apply the pi
    phase correction.  Blocks in ascending order, s12 before s23."""
    syndromes: list[tuple[int, int]] = []
    for block in range(code.num_blocks):
        o12, state = measure_stabilizer(state, code, block, "s12", rng, ancilla, method)
        o23, state = measure_stabilizer(state, code, block, "s23", rng, ancilla, method)
        syndromes.append((o12, o23))
        offset = decode((o12, o23))
        if offset is not None:
            state = apply_local_phase(state, code.block_modes(block)[0] + offset, math.pi)
    return state, syndromes


# ---------------------------------------------------------------------------
# reference recovery
# ---------------------------------------------------------------------------


def measure_reference_and_recover(
    state: SparseState,
    code: RepetitionCode,
    rng: np.random.Generator,
) -> SparseState:
    """Collapse reference dephasing by measuring the bank atom number, then
    project back onto the code space.

    After any pattern of reference-mode phases the state is a phase-weighted
    sum of fixed-bank-number sectors; measuring the bank count (one draw)
    leaves one sector, and because every codeword of a fixed logical number
    weights those sectors identically, the code-space projection restores
    the logical state exactly (up to a global phase).  Exactness needs the
    input to be a code state (of one logical number) up to reference
    phases; a coexisting system-mode error aliases into the code space
    under the sector projection and is only approximately removed.  Raises
    if the projection is numerically zero.
    """
    lay = state.layout
    modes = tuple(
        range(lay.num_system_modes, lay.num_system_modes + lay.num_reference_modes)
    )
    _, state = measure_mode_number(state, modes, rng)
    projected = project_codespace(state, code)
    norm = projected.norm()
    if norm < 1e-12:
        raise ValueError("state has no code-space component in this sector")
    return projected.with_entries(
        {l: a / norm for l, a in projected.entries.items()}
    )
