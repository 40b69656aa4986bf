"""Mode bookkeeping for fermionic registers with ancilla qubits.

A register holds ``M_s`` system modes, ``M_r`` reference modes and ``A``
ancilla qubits, populated by a fixed total of ``N`` fermionic atoms.  The
fermionic modes carry a canonical ordering that fixes every exchange sign:

* system modes first, block-major — mode ``i`` occupies bit ``i`` for
  ``0 <= i < M_s``;
* reference modes next — reference mode ``j`` (0-based) occupies bit
  ``M_s + j``;
* ancilla qubits are *not* part of the fermionic ordering.  In the full
  (physical) representation ancilla ``a`` occupies bit ``M_s + M_r + a``;
  in the compressed representation (see :mod:`fermiqec.backend`) the
  reference bits are dropped and ancilla ``a`` occupies bit ``M_s + a``.

Basis labels are plain ints interpreted through this bit layout.  Keeping
labels as ints makes sign bookkeeping a popcount and lets states live in
ordinary dicts.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["RegisterLayout", "jw_sign"]


@dataclass(frozen=True)
class RegisterLayout:
    """Sizes and bit positions for one register.

    ``num_reference_modes >= total_atoms`` is required so the reference can
    hold every atom (the empty-system configuration must exist).
    """

    num_system_modes: int
    num_reference_modes: int
    total_atoms: int
    num_ancilla_qubits: int = 0
    block_size: int = 3

    def __post_init__(self) -> None:
        if self.num_system_modes < 1:
            raise ValueError("need at least one system mode")
        if self.total_atoms < 0:
            raise ValueError("total_atoms must be non-negative")
        if self.num_reference_modes < self.total_atoms:
            raise ValueError(
                "reference must be able to hold all atoms "
                f"(M_r={self.num_reference_modes} < N={self.total_atoms})"
            )
        if self.num_ancilla_qubits < 0:
            raise ValueError("num_ancilla_qubits must be non-negative")

    # -- derived sizes -------------------------------------------------

    @property
    def num_fermion_modes(self) -> int:
        return self.num_system_modes + self.num_reference_modes

    @property
    def system_mask(self) -> int:
        return (1 << self.num_system_modes) - 1

    @property
    def reference_mask(self) -> int:
        return ((1 << self.num_reference_modes) - 1) << self.num_system_modes

    @property
    def fermion_mask(self) -> int:
        return (1 << self.num_fermion_modes) - 1

    # -- bit positions ---------------------------------------------------

    def reference_mode(self, j: int) -> int:
        """Absolute fermionic index of reference mode ``j`` (0-based)."""
        if not 0 <= j < self.num_reference_modes:
            raise ValueError(f"reference mode {j} out of range")
        return self.num_system_modes + j

    def reference_modes(self) -> tuple[int, ...]:
        """Absolute indices of all reference modes, ascending."""
        m = self.num_system_modes
        return tuple(range(m, m + self.num_reference_modes))

    def ancilla_bit(self, a: int, compressed: bool = False) -> int:
        """Bit position of ancilla ``a`` in the chosen representation."""
        if not 0 <= a < self.num_ancilla_qubits:
            raise ValueError(f"ancilla {a} out of range")
        base = self.num_system_modes if compressed else self.num_fermion_modes
        return base + a

    # -- label dissection ------------------------------------------------

    def system_part(self, label: int) -> int:
        return label & self.system_mask

    def reference_part(self, label: int) -> int:
        """Reference bits of a physical label, shifted down to bit 0."""
        return (label & self.reference_mask) >> self.num_system_modes

    def ancilla_part(self, label: int, compressed: bool = False) -> int:
        shift = self.num_system_modes if compressed else self.num_fermion_modes
        return label >> shift

    def format_label(self, label: int, compressed: bool = False) -> str:
        """Human-readable ``sys|ref|anc`` occupation string for messages."""
        sys_bits = "".join(
            str((label >> i) & 1) for i in range(self.num_system_modes)
        )
        if compressed:
            anc = label >> self.num_system_modes
            ref_bits = "(implied)"
        else:
            anc = label >> self.num_fermion_modes
            ref_bits = "".join(
                str((label >> self.reference_mode(j)) & 1)
                for j in range(self.num_reference_modes)
            )
        anc_bits = "".join(
            str((anc >> a) & 1) for a in range(self.num_ancilla_qubits)
        )
        return f"sys={sys_bits} ref={ref_bits} anc={anc_bits or '-'}"


def jw_sign(label: int, i: int) -> int:
    """Exchange sign of a ladder operator on mode ``i``: ``(-1)**k`` with
    ``k`` the number of occupied fermionic modes strictly before ``i``.
    """
    return -1 if (label & ((1 << i) - 1)).bit_count() & 1 else 1
