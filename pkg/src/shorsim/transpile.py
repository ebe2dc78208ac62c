"""Decomposition into the basis {cx, id, rz, sx, x} with full
connectivity, plus layered depth accounting.

Decompositions preserve the unitary up to global phase only; that phase
is unobservable, so measurement statistics are unchanged. No routing is
performed: any pair of qubits may share a cx.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .circuit import (CSWAP, CX, H, ID, PHASE, RZ, SWAP, SX, X, CircuitSpec,
                      GateOp, Instruction, Measure, Reset)

BASIS_KINDS = (CX, ID, RZ, SX, X)

_QUARTER = math.pi / 4.0


def depth_model(n: int) -> int:
    """Quadratic depth estimate 10n^2 + 20n + 5 for bit width n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return 10 * n * n + 20 * n + 5


def _rz(q: int, angle: float) -> GateOp:
    return GateOp(RZ, (q,), angle=angle)


def _cx(c: int, t: int) -> GateOp:
    return GateOp(CX, (t,), (c,))


def _h_seq(q: int) -> list[GateOp]:
    # H = rz(pi/2) sx rz(pi/2) up to global phase
    return [_rz(q, math.pi / 2), GateOp(SX, (q,)), _rz(q, math.pi / 2)]


def _cphase_seq(c: int, t: int, angle: float) -> list[GateOp]:
    half = angle / 2.0
    return [_rz(c, half), _rz(t, half), _cx(c, t), _rz(t, -half), _cx(c, t)]


def _ccphase_seq(c1: int, c2: int, t: int, angle: float) -> list[GateOp]:
    # split the rotation over two singly-controlled pieces and a relative
    # sign flip carried by the cx pair
    half = angle / 2.0
    ops = _cphase_seq(c2, t, half)
    ops.append(_cx(c1, c2))
    ops += _cphase_seq(c2, t, -half)
    ops.append(_cx(c1, c2))
    ops += _cphase_seq(c1, t, half)
    return ops


def _ccx_seq(c1: int, c2: int, t: int) -> list[GateOp]:
    # standard 6-cx construction with rz(+-pi/4) in place of T gates
    return (_h_seq(t)
            + [_cx(c2, t), _rz(t, -_QUARTER),
               _cx(c1, t), _rz(t, _QUARTER),
               _cx(c2, t), _rz(t, -_QUARTER),
               _cx(c1, t), _rz(c2, _QUARTER), _rz(t, _QUARTER)]
            + _h_seq(t)
            + [_cx(c1, c2), _rz(c1, _QUARTER), _rz(c2, -_QUARTER),
               _cx(c1, c2)])


def decompose(gate: GateOp) -> list[GateOp]:
    """Basis-gate sequence equal to `gate` up to global phase.

    The classical condition, if any, is copied onto every emitted op so
    the whole sequence stays an all-or-nothing unit.
    """
    k = gate.kind
    if k in (X, SX, RZ, ID):
        out = [GateOp(k, gate.targets, angle=gate.angle)]
    elif k == CX:
        out = [_cx(gate.controls[0], gate.targets[0])]
    elif k == H:
        out = _h_seq(gate.targets[0])
    elif k == PHASE:
        t = gate.targets[0]
        if len(gate.controls) == 0:
            out = [_rz(t, gate.angle)]
        elif len(gate.controls) == 1:
            out = _cphase_seq(gate.controls[0], t, gate.angle)
        else:
            out = _ccphase_seq(gate.controls[0], gate.controls[1], t, gate.angle)
    elif k == SWAP:
        q1, q2 = gate.targets
        out = [_cx(q1, q2), _cx(q2, q1), _cx(q1, q2)]
    elif k == CSWAP:
        c = gate.controls[0]
        q1, q2 = gate.targets
        out = [_cx(q2, q1)] + _ccx_seq(c, q1, q2) + [_cx(q2, q1)]
    else:
        raise ValueError(f"unknown gate kind {k!r}")
    if gate.condition is not None:
        out = [GateOp(op.kind, op.targets, op.controls, op.angle,
                      condition=gate.condition) for op in out]
    return out


@dataclass
class DepthReport:
    """Measured depth next to the quadratic model, never asserted equal.

    subcircuit_depths holds one entry per executed circuit: 2n entries
    for the reduced variant's split sequence, a single entry otherwise.
    Measurements and resets occupy one layer each; id never adds depth.
    """

    n: int
    variant: str
    qubit_count: int
    subcircuit_depths: list[int]
    max_depth: int
    total_depth: int
    model_value: int
    gate_counts: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "variant": self.variant,
            "qubit_count": self.qubit_count,
            "subcircuit_depths": list(self.subcircuit_depths),
            "max_depth": self.max_depth,
            "total_depth": self.total_depth,
            "model_value": self.model_value,
            "gate_counts": dict(sorted(self.gate_counts.items())),
        }


def _op_qubits(op: Instruction) -> tuple[int, ...]:
    if isinstance(op, Measure):
        return (op.qubit,)
    if isinstance(op, Reset):
        return (op.qubit,)
    return op.qubits


def circuit_depth(ops: list[Instruction]) -> int:
    """Longest chain of ops sharing qubits, greedy layering."""
    level: dict[int, int] = {}
    depth = 0
    for op in ops:
        if isinstance(op, GateOp) and op.kind == ID:
            continue
        qs = _op_qubits(op)
        layer = 1 + max((level.get(q, 0) for q in qs), default=0)
        for q in qs:
            level[q] = layer
        depth = max(depth, layer)
    return depth


def gate_counts(ops: list[Instruction]) -> dict[str, int]:
    counts: dict[str, int] = {}
    for op in ops:
        if isinstance(op, Measure):
            key = "measure"
        elif isinstance(op, Reset):
            key = "reset"
        else:
            key = op.kind
        counts[key] = counts.get(key, 0) + 1
    return counts


def transpile(circuit: CircuitSpec) -> CircuitSpec:
    """Rewrite every gate into the basis; measurements and resets pass
    through unchanged."""
    out = CircuitSpec(circuit.qubit_count, circuit.classical_bit_count)
    for op in circuit.ops:
        if isinstance(op, (Measure, Reset)):
            out.append(op)
        else:
            out.append(*decompose(op))
    return out


def report_for(circuits: list[CircuitSpec], n: int, variant: str) -> DepthReport:
    """Transpile each circuit and assemble the combined depth report."""
    if not circuits:
        raise ValueError("at least one circuit required")
    depths: list[int] = []
    counts: dict[str, int] = {}
    for circ in circuits:
        basis = transpile(circ)
        depths.append(circuit_depth(basis.ops))
        for k, v in gate_counts(basis.ops).items():
            counts[k] = counts.get(k, 0) + v
    return DepthReport(n=n, variant=variant,
                       qubit_count=circuits[0].qubit_count,
                       subcircuit_depths=depths,
                       max_depth=max(depths), total_depth=sum(depths),
                       model_value=depth_model(n), gate_counts=counts)
