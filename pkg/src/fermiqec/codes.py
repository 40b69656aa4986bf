"""Fermionic stabilizer codes.

Two constructions live here:

* a three-mode repetition code against single-mode phase errors, tiled over
  the system register in blocks of three, with stabilizers ``i x1 x2`` and
  ``i y2 y3`` and logical raising/lowering operators built from the dressed
  ladder operators, and

* a seven-mode CSS code whose code space is extracted by projector plus
  Gram-Schmidt and which is used to analyse atom-loss Kraus channels through
  the Knill-Laflamme matrix.

All constructions go through :func:`fermiqec.reference.apply_c` and friends,
so they work identically on physical and compressed states.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .gates import apply_annihilation, apply_fswap
from .reference import apply_c, apply_c_dagger, apply_majorana, h_basis_state
from .registers import RegisterLayout
from .states import SparseState, add_states, basis_state, scale_state

__all__ = [
    "RepetitionCode",
    "apply_stabilizer",
    "stabilizer_expectation",
    "prepare_logical_vacuum",
    "apply_logical_C",
    "apply_logical_C_dagger",
    "logical_basis_state",
    "logical_number_expectation",
    "block_parity",
    "codespace_states",
    "random_codespace_state",
    "project_codespace",
    "SteaneCode",
    "apply_loss_kraus",
    "KLReport",
    "kl_check",
    "SteaneLossReport",
    "steane_projector_check",
]


class RepetitionCode:
    """Three-mode repetition blocks over the system register.

    Block ``b`` occupies modes ``3b, 3b+1, 3b+2``.  Its code space is the
    span of the two-atom "empty" word and the odd-parity "occupied" word;
    the logical occupation is simply the block parity.
    """

    def __init__(self, layout: RegisterLayout):
        if layout.block_size != 3:
            raise ValueError("repetition blocks hold exactly three modes")
        if layout.num_system_modes % 3:
            raise ValueError("system register must tile into three-mode blocks")
        self.layout = layout
        self.num_blocks = layout.num_system_modes // 3
        self._compiled: dict[tuple[str, int], tuple[list[int], list[complex]]] = {}
        self._fswaps: dict[tuple[int, int], tuple[list[int], list[int]]] = {}
        self._words: dict[bool, list[tuple[tuple[int, ...], SparseState]]] = {}

    def block_modes(self, block: int) -> tuple[int, int, int]:
        if not 0 <= block < self.num_blocks:
            raise ValueError(f"block {block} outside register")
        base = 3 * block
        return (base, base + 1, base + 2)

    def block_mask(self, block: int) -> int:
        return 0b111 << self.block_modes(block)[0]

    def compiled_stabilizer(
        self, which: str, block: int
    ) -> tuple[list[int], list[complex]]:
        """Label permutation + phase of a stabilizer on compressed labels.

        A stabilizer maps every occupation label to at most one label, so
        its action is a (partial) permutation with phases; precomputing it
        makes repeated measurements cheap.  Labels whose system count cannot
        occur in a valid compressed state get phase 0.
        """
        key = (which, block)
        if key not in self._compiled:
            lay = self.layout
            dim = 1 << lay.num_system_modes
            perm = [0] * dim
            phase = [0.0 + 0.0j] * dim
            for sys in range(dim):
                n = sys.bit_count()
                if n > lay.total_atoms or lay.total_atoms - n > lay.num_reference_modes:
                    continue
                img = apply_stabilizer(
                    SparseState(lay, {sys: 1.0 + 0.0j}, compressed=True),
                    self,
                    block,
                    which,
                )
                if len(img.entries) > 1:
                    raise AssertionError("stabilizer image of a label is not a label")
                for l, a in img.entries.items():
                    perm[sys] = l
                    phase[sys] = a
            self._compiled[key] = (perm, phase)
        return self._compiled[key]

    def compiled_fswap(
        self, block_a: int, block_b: int
    ) -> tuple[list[int], list[int]]:
        """Label permutation + sign of the transversal block fswap."""
        key = (block_a, block_b)
        if key not in self._fswaps:
            lay = self.layout
            pairs = list(zip(self.block_modes(block_a), self.block_modes(block_b)))
            dim = 1 << lay.num_system_modes
            perm = [0] * dim
            sign = [1] * dim
            for sys in range(dim):
                img = SparseState(lay, {sys: 1.0 + 0.0j}, compressed=True)
                for ma, mb in pairs:
                    img = apply_fswap(img, ma, mb)
                ((l, a),) = img.entries.items()
                perm[sys] = l
                sign[sys] = 1 if a.real > 0 else -1
            self._fswaps[key] = (perm, sign)
        return self._fswaps[key]

    def codespace_states(self, compressed: bool = False) -> list[SparseState]:
        """Orthonormal logical basis states the register can hold."""
        if compressed not in self._words:
            words = []
            for bits in itertools.product((0, 1), repeat=self.num_blocks):
                if 2 * self.num_blocks + sum(bits) <= self.layout.total_atoms:
                    words.append((bits, logical_basis_state(self, bits, compressed)))
            self._words[compressed] = words
        return [w for _, w in self._words[compressed]]


def apply_stabilizer(
    state: SparseState, code: RepetitionCode, block: int, which: str
) -> SparseState:
    """One block stabilizer: ``s12`` is i x1 x2, ``s23`` is i y2 y3."""
    m1, m2, m3 = code.block_modes(block)
    if which == "s12":
        out = apply_majorana(state, m2, "x")
        out = apply_majorana(out, m1, "x")
    elif which == "s23":
        out = apply_majorana(state, m3, "y")
        out = apply_majorana(out, m2, "y")
    else:
        raise ValueError(f"unknown stabilizer {which!r}")
    return scale_state(out, 1j)


def stabilizer_expectation(
    state: SparseState, code: RepetitionCode, block: int, which: str
) -> float:
    """<S> on a (not necessarily normalized) state; real by hermiticity."""
    val = state.inner(apply_stabilizer(state, code, block, which))
    return val.real / state.norm_sq()


# ---------------------------------------------------------------------------
# logical states
# ---------------------------------------------------------------------------


def _block_vacuum_step(
    state: SparseState, modes: tuple[int, int, int]
) -> SparseState:
    """Entangle one block's empty word onto the current state:
    (1 + i c1+ c2+ - i c2+ c3+ + c1+ c3+) / 2."""
    m1, m2, m3 = modes
    pair_12 = apply_c_dagger(apply_c_dagger(state, m2), m1)
    pair_23 = apply_c_dagger(apply_c_dagger(state, m3), m2)
    pair_13 = apply_c_dagger(apply_c_dagger(state, m3), m1)
    out = add_states(state, pair_12, 0.5, 0.5j)
    out = add_states(out, pair_23, 1.0, -0.5j)
    out = add_states(out, pair_13, 1.0, 0.5)
    return out


def prepare_logical_vacuum(code: RepetitionCode, compressed: bool = False) -> SparseState:
    """All blocks in the logical empty word.

    Needs two bank atoms per block; the anchor component with every system
    mode empty fixes normalization and global phase.
    """
    lay = code.layout
    if lay.total_atoms < 2 * code.num_blocks:
        raise ValueError(
            f"{lay.total_atoms} atoms cannot fill {code.num_blocks} blocks "
            "with two atoms each"
        )
    if compressed:
        state = basis_state(lay, 0, compressed=True)
        anchor = 0
    else:
        state = h_basis_state(lay, 0)
        anchor = next(iter(state.entries))
    for b in range(code.num_blocks):
        state = _block_vacuum_step(state, code.block_modes(b))
    amp = state.entries.get(anchor, 0.0)
    if abs(amp) < 1e-9:
        raise AssertionError("logical vacuum lost its anchor component")
    state = scale_state(state, abs(amp) / amp)
    return state.normalized()


def _ladder_product(
    state: SparseState, ops: Sequence[tuple[int, bool]]
) -> SparseState:
    """Apply dressed ladder operators in the given order (first op first)."""
    for mode, create in ops:
        state = apply_c_dagger(state, mode) if create else apply_c(state, mode)
    return state


def apply_logical_C(state: SparseState, code: RepetitionCode, block: int) -> SparseState:
    """Logical lowering operator of one block:
    i (c1 c2 c3 + c1 c2+ c3+ + c1+ c2 c3+ + c1+ c2+ c3)."""
    m1, m2, m3 = code.block_modes(block)
    terms = [
        [(m3, False), (m2, False), (m1, False)],
        [(m3, True), (m2, True), (m1, False)],
        [(m3, True), (m2, False), (m1, True)],
        [(m3, False), (m2, True), (m1, True)],
    ]
    out = state.with_entries({})
    for t in terms:
        out = add_states(out, _ladder_product(state, t))
    return scale_state(out, 1j)


def apply_logical_C_dagger(
    state: SparseState, code: RepetitionCode, block: int
) -> SparseState:
    """Adjoint of the logical lowering operator:
    -i (c3+ c2+ c1+ + c3 c2 c1+ + c3 c2+ c1 + c3+ c2 c1)."""
    m1, m2, m3 = code.block_modes(block)
    terms = [
        [(m1, True), (m2, True), (m3, True)],
        [(m1, True), (m2, False), (m3, False)],
        [(m1, False), (m2, True), (m3, False)],
        [(m1, False), (m2, False), (m3, True)],
    ]
    out = state.with_entries({})
    for t in terms:
        out = add_states(out, _ladder_product(state, t))
    return scale_state(out, -1j)


def logical_basis_state(
    code: RepetitionCode, bits: Sequence[int], compressed: bool = False
) -> SparseState:
    """|b1 ... bM>_L, raising blocks in ascending order from the vacuum."""
    pattern = tuple(int(b) for b in bits)
    if len(pattern) != code.num_blocks:
        raise ValueError(f"expected {code.num_blocks} logical bits")
    if any(b not in (0, 1) for b in pattern):
        raise ValueError("logical bits must be 0 or 1")
    need = 2 * code.num_blocks + sum(pattern)
    if need > code.layout.total_atoms:
        raise ValueError(
            f"codeword needs up to {need} atoms but the register holds "
            f"{code.layout.total_atoms}"
        )
    state = prepare_logical_vacuum(code, compressed)
    for b, bit in enumerate(pattern):
        if bit:
            state = apply_logical_C_dagger(state, code, b)
    return state


def block_parity(code: RepetitionCode, label: int, block: int) -> int:
    return (label & code.block_mask(block)).bit_count() & 1


def logical_number_expectation(
    state: SparseState, code: RepetitionCode, block: int
) -> float:
    """<N_b>: the diagonal logical occupation, i.e. the block parity."""
    mask = code.block_mask(block)
    num = math.fsum(
        a.real * a.real + a.imag * a.imag
        for l, a in state.entries.items()
        if (l & mask).bit_count() & 1
    )
    return num / state.norm_sq()


def codespace_states(code: RepetitionCode, compressed: bool = False) -> list[SparseState]:
    return code.codespace_states(compressed)


def random_codespace_state(
    code: RepetitionCode, rng: np.random.Generator, compressed: bool = False
) -> SparseState:
    """Random normalized state in the span of the logical basis states."""
    words = code.codespace_states(compressed)
    amps = rng.normal(size=len(words)) + 1j * rng.normal(size=len(words))
    amps /= np.linalg.norm(amps)
    out = words[0].with_entries({})
    for w, a in zip(words, amps):
        out = add_states(out, w, 1.0, complex(a))
    return out


def project_codespace(state: SparseState, code: RepetitionCode) -> SparseState:
    """Orthogonal (unnormalized) projection onto the span of the logical
    basis states the register can hold.

    Ancilla qubits are spectators: each ancilla bit pattern is projected
    independently, so entanglement between the ancillas and the logical
    content survives the projection.
    """
    lay = state.layout
    words = code.codespace_states(state.compressed)
    if lay.num_ancilla_qubits == 0:
        out = state.with_entries({})
        for w in words:
            ov = w.inner(state)
            if ov != 0.0:
                out = add_states(out, w, 1.0, ov)
        return out
    shift = lay.num_system_modes
    if not state.compressed:
        shift += lay.num_reference_modes
    fermion_mask = (1 << shift) - 1
    groups: dict[int, dict[int, complex]] = {}
    for l, a in state.entries.items():
        groups.setdefault(l >> shift, {})[l & fermion_mask] = a
    out_entries: dict[int, complex] = {}
    for anc, sub in groups.items():
        base = anc << shift
        for w in words:
            re: list[float] = []
            im: list[float] = []
            for l, wl in w.entries.items():
                b = sub.get(l)
                if b is None:
                    continue
                t = wl.conjugate() * b
                re.append(t.real)
                im.append(t.imag)
            ov = complex(math.fsum(re), math.fsum(im))
            if ov != 0.0:
                for l, wl in w.entries.items():
                    key = base | l
                    out_entries[key] = out_entries.get(key, 0j) + ov * wl
    return state.with_entries(out_entries)


# ---------------------------------------------------------------------------
# the seven-mode CSS code and loss channels
# ---------------------------------------------------------------------------


class SteaneCode:
    """Seven-mode CSS code; code space extracted by projection.

    The parity groups follow the (7,4) Hamming checks.  Diagonal stabilizers
    multiply each group by (1 - 2 n_i); the conjugate stabilizers are the
    corresponding products of x Majoranas, applied highest mode first.
    """

    GROUPS = ((3, 4, 5, 6), (1, 2, 5, 6), (0, 2, 4, 6))

    def __init__(self, layout: RegisterLayout):
        if layout.num_system_modes != 7:
            raise ValueError("this code needs exactly seven system modes")
        self.layout = layout
        self._codewords: list[SparseState] | None = None

    def apply_z_stabilizer(self, state: SparseState, group: int) -> SparseState:
        mask = 0
        for i in self.GROUPS[group]:
            mask |= 1 << i
        return state.with_entries(
            {
                l: (-a if (l & mask).bit_count() & 1 else a)
                for l, a in state.entries.items()
            }
        )

    def apply_x_stabilizer(self, state: SparseState, group: int) -> SparseState:
        for mode in sorted(self.GROUPS[group], reverse=True):
            state = apply_majorana(state, mode, "x")
        return state

    def project(self, state: SparseState) -> SparseState:
        for group in range(3):
            s = self.apply_z_stabilizer(state, group)
            state = add_states(state, s, 0.5, 0.5)
        for group in range(3):
            s = self.apply_x_stabilizer(state, group)
            state = add_states(state, s, 0.5, 0.5)
        return state

    def codewords(self) -> list[SparseState]:
        """Orthonormal code basis via Gram-Schmidt over projected labels;
        asserts the code space has rank exactly two."""
        if self._codewords is None:
            words: list[SparseState] = []
            for sys in range(1 << self.layout.num_system_modes):
                v = self.project(h_basis_state(self.layout, sys))
                for w in words:
                    v = add_states(v, w, 1.0, -w.inner(v))
                if v.norm() > 1e-9:
                    words.append(v.normalized())
            if len(words) != 2:
                raise AssertionError(f"code space rank {len(words)}, expected 2")
            self._codewords = words
        return self._codewords


def apply_loss_kraus(state: SparseState, index: int, p: float) -> SparseState:
    """One Kraus operator of the per-mode atom-loss channel.

    Index 0 scales by sqrt(1 - M p); indices 1..M are sqrt(p) times the bare
    site annihilation on mode index-1 (the environment records which atom
    left); indices M+1..2M are sqrt(p) times the empty-mode projector
    (nothing there to lose).  The channel is trace preserving for any state.
    """
    m = state.layout.num_system_modes
    if not 0 <= index <= 2 * m:
        raise ValueError(f"loss channel on {m} modes has {2 * m + 1} Kraus operators")
    if p < 0.0 or m * p > 1.0:
        raise ValueError("loss probability outside [0, 1/M]")
    if index == 0:
        return scale_state(state, math.sqrt(1.0 - m * p))
    if index <= m:
        return scale_state(apply_annihilation(state, index - 1), math.sqrt(p))
    mode = index - m - 1
    kept = {l: a for l, a in state.entries.items() if not (l >> mode) & 1}
    return scale_state(state.with_entries(kept), math.sqrt(p))


@dataclass
class KLReport:
    """Knill-Laflamme matrix of a Kraus set against a code basis.

    ``matrix[a, i, b, j]`` holds <K_a w_i | K_b w_j>.  The channel is
    correctable exactly when every entry with i != j vanishes and the
    diagonal-in-codeword entries do not depend on the codeword.
    """

    matrix: np.ndarray
    max_offdiagonal_violation: float
    max_codeword_dependence: float
    passed: bool
    atol: float = 1e-12


def kl_check(
    codewords: Sequence[SparseState],
    errors: Sequence[Callable[[SparseState], SparseState]],
    atol: float = 1e-12,
) -> KLReport:
    """Evaluate the exact-correctability conditions of an error set on a
    code basis; each error is a callable acting on a state."""
    n_k = len(errors)
    n_w = len(codewords)
    mapped = [[op(w) for w in codewords] for op in errors]
    gram = np.zeros((n_k, n_w, n_k, n_w), dtype=np.complex128)
    for a in range(n_k):
        for i in range(n_w):
            for b in range(n_k):
                for j in range(n_w):
                    gram[a, i, b, j] = mapped[a][i].inner(mapped[b][j])
    off = 0.0
    dep = 0.0
    for a in range(n_k):
        for b in range(n_k):
            for i in range(n_w):
                for j in range(n_w):
                    if i != j:
                        off = max(off, abs(gram[a, i, b, j]))
            first = gram[a, 0, b, 0]
            for i in range(1, n_w):
                dep = max(dep, abs(gram[a, i, b, i] - first))
    return KLReport(gram, off, dep, off <= atol and dep <= atol, atol)


@dataclass
class SteaneLossReport:
    p: float
    kl: KLReport
    channel_weights: np.ndarray
    ladder_weights: np.ndarray
    max_ladder_cross: float


def steane_projector_check(p: float, atol: float = 1e-12) -> SteaneLossReport:
    """Loss-channel Knill-Laflamme analysis on the seven-mode code.

    ``channel_weights[a, b]`` is the codeword-averaged coefficient matrix;
    ``ladder_weights`` are its diagonal entries for the annihilation Kraus
    operators (each p/2 when the code smears every mode to half filling);
    ``max_ladder_cross`` scans every cross term involving an annihilation
    operator, all of which must vanish.
    """
    lay = RegisterLayout(7, 7, 7)
    code = SteaneCode(lay)
    words = code.codewords()
    m = lay.num_system_modes
    kraus = [
        (lambda s, i=i: apply_loss_kraus(s, i, p)) for i in range(2 * m + 1)
    ]
    kl = kl_check(words, kraus, atol)
    n_w = len(words)
    weights = kl.matrix[:, 0, :, 0].copy()
    for i in range(1, n_w):
        weights += kl.matrix[:, i, :, i]
    weights /= n_w
    ladder = np.array([weights[a, a].real for a in range(1, m + 1)])
    cross = 0.0
    for a in range(1, m + 1):
        for b in range(2 * m + 1):
            if b != a:
                cross = max(cross, abs(weights[a, b]))
    return SteaneLossReport(p, kl, weights, ladder, cross)
