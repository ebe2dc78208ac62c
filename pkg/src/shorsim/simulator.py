"""Dense statevector execution with mid-circuit measurement and reset.

Gate application mutates the amplitude vector in place through reshaped
views, so no full-size temporaries are allocated for diagonal or
permutation gates. Controlled gates act on the slice where every control
qubit is 1; classically conditioned gates are skipped entirely (bit-exact
identity) when the condition is unmet.
"""

from __future__ import annotations

import cmath
import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import (CSWAP, CX, H, ID, PHASE, RZ, SWAP, SX, X, CapacityError,
                      CircuitSpec, GateOp, Measure, Reset)

MAX_QUBITS = 24

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_SX_P = 0.5 + 0.5j
_SX_M = 0.5 - 0.5j


def _qubit_view(amps: np.ndarray, nq: int, qubits) -> tuple[np.ndarray, dict[int, int]]:
    """Reshape so that each addressed qubit owns one length-2 axis and all
    other qubits stay folded; returns the view and each qubit's axis."""
    shape: list[int] = []
    pos: dict[int, int] = {}
    hi = nq
    for q in sorted(set(qubits), reverse=True):
        shape.append(1 << (hi - 1 - q))
        pos[q] = len(shape)
        shape.append(2)
        hi = q
    shape.append(1 << hi)
    return amps.reshape(shape), pos


def derive_seed(master_seed: int, *labels) -> int:
    """Deterministic per-run seed from a master seed and a run label."""
    digest = hashlib.sha256(repr((master_seed,) + labels).encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class MeasurementEntry:
    clbit: int
    value: int
    probability: float  # pre-measurement probability of the observed value


@dataclass
class MeasurementRecord:
    entries: list[MeasurementEntry] = field(default_factory=list)

    def bit_values(self) -> dict[int, int]:
        return {e.clbit: e.value for e in self.entries}

    def __len__(self) -> int:
        return len(self.entries)


class QuantumState:
    """Complex amplitude vector plus classical bit store and RNG stream."""

    def __init__(self, qubit_count: int, classical_bit_count: int, rng: np.random.Generator):
        self.qubit_count = qubit_count
        self.classical_bits = [0] * classical_bit_count
        self._written: set[int] = set()
        self.rng = rng
        self.amplitudes = np.zeros(1 << qubit_count, dtype=np.complex128)
        self.amplitudes[0] = 1.0
        self.record = MeasurementRecord()

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probability_of_one(self, qubit: int) -> float:
        branch = self._slice([(qubit, 1)])
        return float(np.vdot(branch, branch).real)

    def _slice(self, assignments: list[tuple[int, int]]) -> np.ndarray:
        """View of the amplitude tensor with the given qubits fixed.

        Only the addressed qubits get their own axes, so the view stays
        low-dimensional regardless of register width.
        """
        view, pos = _qubit_view(self.amplitudes, self.qubit_count,
                                [q for q, _ in assignments])
        idx: list = [slice(None)] * view.ndim
        for q, b in assignments:
            idx[pos[q]] = b
        return view[tuple(idx)]

    def _check_qubit(self, q: int) -> None:
        if not 0 <= q < self.qubit_count:
            raise ValueError(f"qubit {q} out of range for width {self.qubit_count}")


def new_state(qubit_count: int, classical_bit_count: int, seed: int) -> QuantumState:
    if not 1 <= qubit_count <= MAX_QUBITS:
        raise CapacityError(
            f"qubit count {qubit_count} outside supported range 1..{MAX_QUBITS}")
    return QuantumState(qubit_count, classical_bit_count, np.random.default_rng(seed))


def apply_gate(state: QuantumState, gate: GateOp) -> QuantumState:
    for q in gate.qubits:
        state._check_qubit(q)
    if gate.condition is not None:
        bit, required = gate.condition
        if bit >= len(state.classical_bits) or bit < 0:
            raise ValueError(f"condition bit {bit} out of range")
        if bit not in state._written:
            raise ValueError(f"condition reads classical bit {bit} before it is written")
        if state.classical_bits[bit] != required:
            return state

    kind = gate.kind
    if kind == ID:
        return state
    view, pos = _qubit_view(state.amplitudes, state.qubit_count, gate.qubits)

    def sub(assignments):
        idx: list = [slice(None)] * view.ndim
        for q, b in assignments:
            idx[pos[q]] = b
        return view[tuple(idx)]

    ctrl = [(c, 1) for c in gate.controls]
    if kind == PHASE:
        branch = sub(ctrl + [(gate.targets[0], 1)])
        branch *= cmath.exp(1j * gate.angle)
    elif kind == RZ:
        t = gate.targets[0]
        b0 = sub([(t, 0)])
        b0 *= cmath.exp(-0.5j * gate.angle)
        b1 = sub([(t, 1)])
        b1 *= cmath.exp(0.5j * gate.angle)
    elif kind == H:
        t = gate.targets[0]
        a0, a1 = sub([(t, 0)]), sub([(t, 1)])
        tmp = a0.copy()
        a0 += a1
        a0 *= _INV_SQRT2
        np.subtract(tmp, a1, out=a1)
        a1 *= _INV_SQRT2
    elif kind in (X, CX):
        t = gate.targets[0]
        a0, a1 = sub(ctrl + [(t, 0)]), sub(ctrl + [(t, 1)])
        tmp = a0.copy()
        a0[...] = a1
        a1[...] = tmp
    elif kind == SX:
        t = gate.targets[0]
        a0, a1 = sub([(t, 0)]), sub([(t, 1)])
        tmp = a0.copy()
        a0 *= _SX_P
        a0 += _SX_M * a1
        a1 *= _SX_P
        a1 += _SX_M * tmp
    elif kind in (SWAP, CSWAP):
        q1, q2 = gate.targets
        a01 = sub(ctrl + [(q1, 0), (q2, 1)])
        a10 = sub(ctrl + [(q1, 1), (q2, 0)])
        tmp = a01.copy()
        a01[...] = a10
        a10[...] = tmp
    else:  # pragma: no cover - GateOp already rejects unknown kinds
        raise ValueError(f"unknown gate kind {kind!r}")
    return state


def _collapse(state: QuantumState, qubit: int) -> tuple[int, float]:
    """Sample the qubit with the Born rule, collapse and renormalize."""
    p1 = state.probability_of_one(qubit)
    outcome = int(state.rng.random() < p1)
    p_outcome = p1 if outcome else 1.0 - p1
    state._slice([(qubit, 1 - outcome)])[...] = 0.0
    # Renormalize by the exact norm of the surviving branch so repeated
    # measurements cannot drift.
    state.amplitudes /= math.sqrt(state.norm())
    return outcome, p_outcome


def measure(state: QuantumState, qubit: int, clbit: int) -> int:
    state._check_qubit(qubit)
    if not 0 <= clbit < len(state.classical_bits):
        raise ValueError(f"classical bit {clbit} out of range")
    outcome, p_outcome = _collapse(state, qubit)
    state.classical_bits[clbit] = outcome
    state._written.add(clbit)
    state.record.entries.append(MeasurementEntry(clbit, outcome, p_outcome))
    return outcome


def reset(state: QuantumState, qubit: int) -> QuantumState:
    state._check_qubit(qubit)
    outcome, _ = _collapse(state, qubit)
    if outcome:
        apply_gate(state, GateOp(X, (qubit,)))
    return state


def run(circuit: CircuitSpec, seed: int) -> tuple[QuantumState, MeasurementRecord]:
    circuit.validate()
    state = new_state(circuit.qubit_count, circuit.classical_bit_count, seed)
    for op in circuit.ops:
        if isinstance(op, Measure):
            measure(state, op.qubit, op.clbit)
        elif isinstance(op, Reset):
            reset(state, op.qubit)
        else:
            apply_gate(state, op)
    return state, state.record


def states_equal(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """Equality of statevectors up to global phase."""
    a = np.asarray(a, dtype=np.complex128).ravel()
    b = np.asarray(b, dtype=np.complex128).ravel()
    if a.shape != b.shape:
        return False
    inner = np.vdot(a, b)
    if abs(inner) < 1e-12:
        return False
    phase = inner / abs(inner)
    return bool(np.max(np.abs(a * phase - b)) < tol)
