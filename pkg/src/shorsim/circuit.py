"""Circuit representation: gate operations, measurements, resets.

Qubit 0 is the least significant bit of the basis-state index
(little-endian), so an integer register reads out as a direct index
decode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Union

# Gate kinds. PHASE may carry 0, 1 or 2 controls; CX, SWAP and CSWAP have
# their controls fixed by kind. ID is an inert single-qubit placeholder.
H = "h"
X = "x"
SX = "sx"
PHASE = "phase"
RZ = "rz"
CX = "cx"
SWAP = "swap"
CSWAP = "cswap"
ID = "id"

_PARAMETERIZED = {PHASE, RZ}
_TARGET_ARITY = {H: 1, X: 1, SX: 1, PHASE: 1, RZ: 1, CX: 1, SWAP: 2, CSWAP: 2,
                 ID: 1}
_CONTROL_ARITY = {H: (0,), X: (0,), SX: (0,), PHASE: (0, 1, 2), RZ: (0,),
                  CX: (1,), SWAP: (0,), CSWAP: (1,), ID: (0,)}


class CapacityError(ValueError):
    """Register width above the desk-scale simulation cap."""


@dataclass(frozen=True)
class GateOp:
    kind: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    angle: Optional[float] = None
    # (classical bit index, required value); the gate is identity when the
    # stored bit differs from the required value.
    condition: Optional[tuple[int, int]] = None

    def __post_init__(self):
        if self.kind not in _TARGET_ARITY:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.targets) != _TARGET_ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {_TARGET_ARITY[self.kind]} target(s)")
        if len(self.controls) not in _CONTROL_ARITY[self.kind]:
            raise ValueError(f"{self.kind} cannot take {len(self.controls)} control(s)")
        qubits = self.targets + self.controls
        if len(set(qubits)) != len(qubits):
            raise ValueError("targets and controls must be distinct")
        if self.kind in _PARAMETERIZED:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"{self.kind} requires a finite angle")
        elif self.angle is not None:
            raise ValueError(f"{self.kind} takes no angle")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.targets + self.controls

    def inverse(self) -> list["GateOp"]:
        """Ops applying the inverse unitary (conditions carried over)."""
        if self.kind in _PARAMETERIZED:
            return [replace(self, angle=-self.angle)]
        if self.kind == SX:
            # SX^4 = I, so SX† = SX^3.
            return [self, self, self]
        return [self]  # H, X, CX, SWAP, CSWAP, ID are involutions


@dataclass(frozen=True)
class Measure:
    qubit: int
    clbit: int


@dataclass(frozen=True)
class Reset:
    qubit: int


Instruction = Union[GateOp, Measure, Reset]


def invert_fragment(ops: list[GateOp]) -> list[GateOp]:
    """Formal inverse of a gate-only fragment: reversed, each gate inverted."""
    out: list[GateOp] = []
    for op in reversed(ops):
        if not isinstance(op, GateOp):
            raise ValueError("only pure gate fragments can be inverted")
        out.extend(op.inverse())
    return out


@dataclass
class CircuitSpec:
    qubit_count: int
    classical_bit_count: int = 0
    ops: list[Instruction] = field(default_factory=list)

    def append(self, *ops: Instruction) -> "CircuitSpec":
        self.ops.extend(ops)
        return self

    def validate(self) -> None:
        written: set[int] = set()
        for op in self.ops:
            if isinstance(op, Measure):
                self._check_qubit(op.qubit)
                if not 0 <= op.clbit < self.classical_bit_count:
                    raise ValueError(f"classical bit {op.clbit} out of range")
                written.add(op.clbit)
            elif isinstance(op, Reset):
                self._check_qubit(op.qubit)
            else:
                for q in op.qubits:
                    self._check_qubit(q)
                if op.condition is not None:
                    bit, _ = op.condition
                    if not 0 <= bit < self.classical_bit_count:
                        raise ValueError(f"condition bit {bit} out of range")
                    if bit not in written:
                        raise ValueError(
                            f"condition reads classical bit {bit} before any measurement writes it")

    def _check_qubit(self, q: int) -> None:
        if not 0 <= q < self.qubit_count:
            raise ValueError(f"qubit {q} out of range for width {self.qubit_count}")
