"""Fermionic mode gates, ancilla-qubit gates, and projective measurements.

The small frozen dataclasses double as circuit instructions (consumed by
``backend.run_circuit``); the ``apply_*`` functions do the actual work on
sparse states.  Everything is functional — inputs are never mutated.

Sign conventions all flow from the Jordan-Wigner ordering fixed in
:mod:`fermiqec.registers`: a site operator on mode ``i`` picks up
``(-1)**(number of occupied modes below i)``.  Ancilla qubits sit above every
fermionic mode and carry no string.

On compressed states (reference occupations implied by the system count)
diagonal gates remain well defined for reference modes, but gates that move
atoms between literal and implied modes do not; those raise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .registers import RegisterLayout, jw_sign
from .states import SparseState, phase_factor

__all__ = [
    "LocalPhase",
    "DensityPhase",
    "Tunneling",
    "FSwap",
    "QubitGate",
    "ControlledComposite",
    "MeasureQubit",
    "MeasureModeNumber",
    "GateOp",
    "mode_occupation",
    "number_expectation",
    "apply_local_phase",
    "apply_density_phase",
    "apply_tunneling",
    "apply_fswap",
    "apply_qubit_gate",
    "apply_controlled",
    "apply_annihilation",
    "apply_creation",
    "measure_qubit",
    "measure_mode_number",
    "apply_gate_op",
]

SQRT_HALF = math.sqrt(0.5)

_QUBIT_DIAGONAL = {
    "s": 1.0j,
    "sdg": -1.0j,
    "z": -1.0 + 0.0j,
    "t": complex(math.cos(math.pi / 4), math.sin(math.pi / 4)),
}


# ---------------------------------------------------------------------------
# circuit instruction records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalPhase:
    """exp(i * theta * n_mode) on one fermionic mode."""

    mode: int
    theta: float


@dataclass(frozen=True)
class DensityPhase:
    """exp(i * theta * n_a * n_b) on a pair of fermionic modes."""

    mode_a: int
    mode_b: int
    theta: float


@dataclass(frozen=True)
class Tunneling:
    """exp(i * theta * (r_a^dag r_b + r_b^dag r_a)) between two modes."""

    mode_a: int
    mode_b: int
    theta: float


@dataclass(frozen=True)
class FSwap:
    """Fermionic swap of two modes (swap plus parity phase)."""

    mode_a: int
    mode_b: int


@dataclass(frozen=True)
class QubitGate:
    """Single- or two-ancilla qubit gate.

    ``kind`` is one of ``h``, ``s``, ``sdg``, ``t``, ``z``, ``phase`` (needs
    ``theta``), ``cz`` (needs ``qubit_b``).
    """

    kind: str
    qubit: int
    qubit_b: int | None = None
    theta: float | None = None


@dataclass(frozen=True)
class ControlledComposite:
    """Apply a sequence of operations on the |1> branch of an ancilla."""

    qubit: int
    ops: tuple["GateOp", ...]


@dataclass(frozen=True)
class MeasureQubit:
    qubit: int
    basis: str = "z"


@dataclass(frozen=True)
class MeasureModeNumber:
    modes: tuple[int, ...]


GateOp = Union[
    LocalPhase,
    DensityPhase,
    Tunneling,
    FSwap,
    QubitGate,
    ControlledComposite,
    MeasureQubit,
    MeasureModeNumber,
]


# ---------------------------------------------------------------------------
# occupation helpers
# ---------------------------------------------------------------------------


def mode_occupation(state: SparseState, label: int, mode: int) -> int:
    """Occupation of fermionic ``mode`` in ``label`` under the state's rep.

    On compressed states the reference modes are implied: reference mode
    ``j`` (0-based) is occupied exactly when ``j < N - n_sys``.
    """
    lay = state.layout
    if mode < 0 or mode >= lay.num_fermion_modes:
        raise ValueError(f"mode {mode} outside fermionic register")
    if not state.compressed or mode < lay.num_system_modes:
        return (label >> mode) & 1
    j = mode - lay.num_system_modes
    n_sys = lay.system_part(label).bit_count()
    return 1 if j < lay.total_atoms - n_sys else 0


def number_expectation(state: SparseState, mode: int) -> float:
    """<n_mode> on a (not necessarily normalized) state."""
    num = math.fsum(
        a.real * a.real + a.imag * a.imag
        for l, a in state.entries.items()
        if mode_occupation(state, l, mode)
    )
    return num / state.norm_sq()


def _check_fermion_mode(lay: RegisterLayout, mode: int) -> None:
    if mode < 0 or mode >= lay.num_fermion_modes:
        raise ValueError(f"mode {mode} outside fermionic register")


def _check_literal_pair(state: SparseState, a: int, b: int, what: str) -> None:
    lay = state.layout
    _check_fermion_mode(lay, a)
    _check_fermion_mode(lay, b)
    if a == b:
        raise ValueError(f"{what} needs two distinct modes")
    if state.compressed and (a >= lay.num_system_modes or b >= lay.num_system_modes):
        raise ValueError(
            f"{what} involving reference modes is undefined on compressed states"
        )


# ---------------------------------------------------------------------------
# diagonal gates
# ---------------------------------------------------------------------------


def apply_local_phase(state: SparseState, mode: int, theta: float) -> SparseState:
    _check_fermion_mode(state.layout, mode)
    ph = phase_factor(theta)
    if ph == 1.0:
        return state.copy()
    out = {
        l: (a * ph if mode_occupation(state, l, mode) else a)
        for l, a in state.entries.items()
    }
    return state.with_entries(out)


def apply_density_phase(
    state: SparseState, mode_a: int, mode_b: int, theta: float
) -> SparseState:
    _check_fermion_mode(state.layout, mode_a)
    _check_fermion_mode(state.layout, mode_b)
    if mode_a == mode_b:
        raise ValueError("density-density phase needs two distinct modes")
    ph = phase_factor(theta)
    out = {}
    for l, a in state.entries.items():
        if mode_occupation(state, l, mode_a) and mode_occupation(state, l, mode_b):
            out[l] = a * ph
        else:
            out[l] = a
    return state.with_entries(out)


# ---------------------------------------------------------------------------
# atom-moving gates
# ---------------------------------------------------------------------------


def _between_sign(label: int, a: int, b: int) -> int:
    """Parity of the occupation strictly between modes a and b."""
    lo, hi = (a, b) if a < b else (b, a)
    mask = ((1 << hi) - 1) & ~((1 << (lo + 1)) - 1)
    return -1 if (label & mask).bit_count() & 1 else 1


def apply_tunneling(
    state: SparseState, mode_a: int, mode_b: int, theta: float
) -> SparseState:
    """exp(i theta (r_a^dag r_b + h.c.)).

    In the single-occupancy sector of the pair this is the 2x2 block
    [[cos t, i s sin t], [i s sin t, cos t]] where ``s`` is the parity of the
    modes strictly between ``a`` and ``b``; doubly occupied and empty pairs
    are untouched.
    """
    _check_literal_pair(state, mode_a, mode_b, "tunneling")
    c, s_amp = math.cos(theta), math.sin(theta)
    flip = (1 << mode_a) | (1 << mode_b)
    out: dict[int, complex] = {}
    for l, amp in state.entries.items():
        occ_a = (l >> mode_a) & 1
        occ_b = (l >> mode_b) & 1
        if occ_a == occ_b:
            out[l] = out.get(l, 0.0) + amp
            continue
        sgn = _between_sign(l, mode_a, mode_b)
        out[l] = out.get(l, 0.0) + c * amp
        moved = l ^ flip
        out[moved] = out.get(moved, 0.0) + 1j * sgn * s_amp * amp
    return state.with_entries(out)


def apply_fswap(state: SparseState, mode_a: int, mode_b: int) -> SparseState:
    """Fermionic swap: |11> -> -|11>, single occupancy swaps with the
    parity sign of the modes in between, empty pairs untouched."""
    _check_literal_pair(state, mode_a, mode_b, "fswap")
    flip = (1 << mode_a) | (1 << mode_b)
    out: dict[int, complex] = {}
    for l, amp in state.entries.items():
        occ_a = (l >> mode_a) & 1
        occ_b = (l >> mode_b) & 1
        if occ_a and occ_b:
            out[l] = out.get(l, 0.0) - amp
        elif occ_a or occ_b:
            sgn = _between_sign(l, mode_a, mode_b)
            moved = l ^ flip
            out[moved] = out.get(moved, 0.0) + sgn * amp
        else:
            out[l] = out.get(l, 0.0) + amp
    return state.with_entries(out)


# ---------------------------------------------------------------------------
# bare site operators (Jordan-Wigner signed)
# ---------------------------------------------------------------------------


def _site_op_entries(
    entries: dict[int, complex], mode: int, create: bool
) -> dict[int, complex]:
    """Raw signed ladder operator on labels; no representation checks."""
    out: dict[int, complex] = {}
    bit = 1 << mode
    for l, amp in entries.items():
        occupied = bool(l & bit)
        if create == occupied:
            continue
        out[l ^ bit] = jw_sign(l, mode) * amp
    return out


def apply_annihilation(state: SparseState, mode: int) -> SparseState:
    """Site annihilation s_mode (with string sign).  Physical states only:
    removing an atom has no compressed representation because the implied
    reference prefix would no longer match."""
    _check_fermion_mode(state.layout, mode)
    if state.compressed:
        raise ValueError("bare site operators are undefined on compressed states")
    return state.with_entries(_site_op_entries(state.entries, mode, create=False))


def apply_creation(state: SparseState, mode: int) -> SparseState:
    """Site creation s_mode^dag (with string sign).  Physical states only."""
    _check_fermion_mode(state.layout, mode)
    if state.compressed:
        raise ValueError("bare site operators are undefined on compressed states")
    return state.with_entries(_site_op_entries(state.entries, mode, create=True))


# ---------------------------------------------------------------------------
# ancilla qubit gates
# ---------------------------------------------------------------------------


def _ancilla_bit(state: SparseState, qubit: int) -> int:
    return 1 << state.layout.ancilla_bit(qubit, compressed=state.compressed)


def apply_qubit_gate(
    state: SparseState,
    kind: str,
    qubit: int,
    qubit_b: int | None = None,
    theta: float | None = None,
) -> SparseState:
    bit = _ancilla_bit(state, qubit)
    if kind == "h":
        out: dict[int, complex] = {}
        for l, amp in state.entries.items():
            lo = l & ~bit
            hi = l | bit
            half = SQRT_HALF * amp
            if l & bit:
                out[lo] = out.get(lo, 0.0) + half
                out[hi] = out.get(hi, 0.0) - half
            else:
                out[lo] = out.get(lo, 0.0) + half
                out[hi] = out.get(hi, 0.0) + half
        return state.with_entries(out)
    if kind in _QUBIT_DIAGONAL or kind == "phase":
        if kind == "phase":
            if theta is None:
                raise ValueError("phase gate needs theta")
            ph = phase_factor(theta)
        else:
            ph = _QUBIT_DIAGONAL[kind]
        return state.with_entries(
            {l: (a * ph if l & bit else a) for l, a in state.entries.items()}
        )
    if kind in ("cz", "cphase"):
        if qubit_b is None:
            raise ValueError(f"{kind} needs a second qubit")
        if kind == "cz":
            ph = -1.0 + 0.0j
        else:
            if theta is None:
                raise ValueError("cphase needs theta")
            ph = phase_factor(theta)
        bit_b = _ancilla_bit(state, qubit_b)
        return state.with_entries(
            {
                l: (a * ph if (l & bit) and (l & bit_b) else a)
                for l, a in state.entries.items()
            }
        )
    raise ValueError(f"unknown qubit gate {kind!r}")


def apply_controlled(
    state: SparseState, qubit: int, fn: Callable[[SparseState], SparseState]
) -> SparseState:
    """Apply ``fn`` on the |1> branch of ancilla ``qubit``.

    ``fn`` must not touch the control qubit itself.
    """
    bit = _ancilla_bit(state, qubit)
    idle = {l: a for l, a in state.entries.items() if not l & bit}
    active = {l: a for l, a in state.entries.items() if l & bit}
    branch = fn(SparseState(state.layout, active, state.compressed))
    if branch.layout != state.layout or branch.compressed != state.compressed:
        raise ValueError("controlled operation changed the representation")
    out = dict(idle)
    for l, a in branch.entries.items():
        if not l & bit:
            raise ValueError("controlled operation moved amplitude off the |1> branch")
        out[l] = out.get(l, 0.0) + a
    return state.with_entries(out)


# ---------------------------------------------------------------------------
# projective measurements
# ---------------------------------------------------------------------------


def measure_qubit(
    state: SparseState,
    qubit: int,
    rng: np.random.Generator,
    basis: str = "z",
) -> tuple[int, SparseState]:
    """Projectively measure one ancilla qubit; exactly one rng draw.

    Returns ``(outcome, post)`` with outcome +1 for bit 0 and -1 for bit 1.
    ``basis='x'`` applies H first, ``basis='y'`` applies S^dag then H; the
    post-measurement state is left in that rotated (computational) frame,
    which is all the gadgets here ever need.
    """
    if basis == "x":
        state = apply_qubit_gate(state, "h", qubit)
    elif basis == "y":
        state = apply_qubit_gate(state, "sdg", qubit)
        state = apply_qubit_gate(state, "h", qubit)
    elif basis != "z":
        raise ValueError(f"unknown measurement basis {basis!r}")
    bit = _ancilla_bit(state, qubit)
    p0 = math.fsum(
        a.real * a.real + a.imag * a.imag
        for l, a in state.entries.items()
        if not l & bit
    )
    total = state.norm_sq()
    if total < 1e-12:
        raise ValueError("cannot measure a (numerically) zero state")
    u = rng.random()
    chose_zero = u < p0 / total
    p_sel = p0 / total if chose_zero else 1.0 - p0 / total
    if p_sel <= 0.0:
        raise ValueError("selected a zero-probability branch")
    scale = 1.0 / math.sqrt(p_sel * total)
    keep = (lambda l: not l & bit) if chose_zero else (lambda l: bool(l & bit))
    post = state.with_entries(
        {l: a * scale for l, a in state.entries.items() if keep(l)}
    )
    return (1 if chose_zero else -1), post


def measure_mode_number(
    state: SparseState,
    modes: tuple[int, ...] | list[int] | set[int],
    rng: np.random.Generator,
) -> tuple[int, SparseState]:
    """Measure the total atom number on a set of fermionic modes.

    Exactly one rng draw.  Outcomes are grouped by count, the cumulative
    distribution runs over ascending counts, and the post state is the
    renormalized projection onto the sampled count.  Works on both
    representations (implied reference occupations included).
    """
    mode_list = sorted(set(modes))
    if not mode_list:
        raise ValueError("need at least one mode to measure")
    for m in mode_list:
        _check_fermion_mode(state.layout, m)
    if not state.entries:
        raise ValueError("cannot measure a zero state")
    by_count: dict[int, list[float]] = {}
    count_of: dict[int, int] = {}
    for l, a in state.entries.items():
        cnt = sum(mode_occupation(state, l, m) for m in mode_list)
        count_of[l] = cnt
        by_count.setdefault(cnt, []).append(a.real * a.real + a.imag * a.imag)
    total = state.norm_sq()
    if total < 1e-12:
        raise ValueError("cannot measure a (numerically) zero state")
    probs = {cnt: math.fsum(terms) / total for cnt, terms in by_count.items()}
    u = rng.random()
    cum = 0.0
    counts = sorted(probs)
    selected = counts[-1]
    for cnt in counts:
        cum += probs[cnt]
        if u < cum:
            selected = cnt
            break
    scale = 1.0 / math.sqrt(probs[selected] * total)
    post = state.with_entries(
        {l: a * scale for l, a in state.entries.items() if count_of[l] == selected}
    )
    return selected, post


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def apply_gate_op(
    state: SparseState, op: GateOp, rng: np.random.Generator | None = None
) -> tuple[SparseState, int | None]:
    """Apply one instruction; returns (state, outcome-or-None)."""
    if isinstance(op, LocalPhase):
        return apply_local_phase(state, op.mode, op.theta), None
    if isinstance(op, DensityPhase):
        return apply_density_phase(state, op.mode_a, op.mode_b, op.theta), None
    if isinstance(op, Tunneling):
        return apply_tunneling(state, op.mode_a, op.mode_b, op.theta), None
    if isinstance(op, FSwap):
        return apply_fswap(state, op.mode_a, op.mode_b), None
    if isinstance(op, QubitGate):
        return apply_qubit_gate(state, op.kind, op.qubit, op.qubit_b, op.theta), None
    if isinstance(op, ControlledComposite):
        def _run(branch: SparseState) -> SparseState:
            for inner in op.ops:
                if isinstance(inner, (MeasureQubit, MeasureModeNumber)):
                    raise ValueError("measurements cannot be controlled")
                branch, _ = apply_gate_op(branch, inner)
            return branch

        return apply_controlled(state, op.qubit, _run), None
    if isinstance(op, MeasureQubit):
        if rng is None:
            raise ValueError("measurement instruction needs an rng")
        outcome, post = measure_qubit(state, op.qubit, rng, op.basis)
        return post, outcome
    if isinstance(op, MeasureModeNumber):
        if rng is None:
            raise ValueError("measurement instruction needs an rng")
        outcome, post = measure_mode_number(state, op.modes, rng)
        return post, outcome
    raise TypeError(f"unknown instruction {op!r}")
