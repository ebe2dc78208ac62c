"""Builders for QFT/IQFT, Fourier-basis adders, modular adders, controlled
multipliers and the two unitary-block variants.

All builders are pure functions returning lists of GateOp over a
RegisterLayout; fragments compose by concatenation and invert exactly via
invert_fragment. Register qubit lists are little-endian: entry j carries
weight 2**j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .circuit import CSWAP, CX, H, PHASE, SWAP, X, GateOp, invert_fragment
from .classical import mod_inv

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ArithParams:
    """Number to factor, base, bit width and modular inverse of the base."""

    N: int
    a: int
    n: int
    a_inv: int

    @classmethod
    def create(cls, N: int, a: int) -> "ArithParams":
        if not 1 < a < N:
            raise ValueError(f"base a={a} outside (1, {N})")
        if math.gcd(a, N) != 1:
            raise ValueError(f"gcd({a}, {N}) != 1")
        n = N.bit_length()  # floor(log2 N) + 1
        return cls(N=N, a=a, n=n, a_inv=mod_inv(a, N))

    def __post_init__(self):
        if not self.N < (1 << self.n) <= 2 * self.N:
            raise ValueError(f"bit width n={self.n} inconsistent with N={self.N}")
        if (self.a * self.a_inv) % self.N != 1:
            raise ValueError("a_inv is not the modular inverse of a")


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit assignment for one unitary-block variant.

    Original variant: b has n+1 qubits (extra overflow qubit) plus one
    ancilla, total 2n+3. Reduced variant: b has n qubits, no ancilla,
    total 2n+1.
    """

    control: int
    x: tuple[int, ...]
    b: tuple[int, ...]
    ancilla: Optional[int] = None

    def __post_init__(self):
        n = len(self.x)
        all_qubits = self.qubits
        if len(set(all_qubits)) != len(all_qubits):
            raise ValueError("layout qubit indices must be distinct")
        if self.ancilla is not None:
            if len(self.b) != n + 1:
                raise ValueError("original layout needs n+1 b qubits")
        else:
            if len(self.b) != n:
                raise ValueError("reduced layout needs n b qubits")

    @property
    def qubits(self) -> tuple[int, ...]:
        anc = (self.ancilla,) if self.ancilla is not None else ()
        return (self.control,) + self.x + self.b + anc

    @property
    def variant(self) -> str:
        return "original" if self.ancilla is not None else "reduced"

    @property
    def width(self) -> int:
        return len(self.qubits)


def original_layout(n: int) -> RegisterLayout:
    return RegisterLayout(control=2 * n + 2, x=tuple(range(n)),
                          b=tuple(range(n, 2 * n + 1)), ancilla=2 * n + 1)


def reduced_layout(n: int) -> RegisterLayout:
    return RegisterLayout(control=2 * n, x=tuple(range(n)),
                          b=tuple(range(n, 2 * n)))


def build_qft(qubits: Sequence[int]) -> list[GateOp]:
    """QFT with the controlled-phase ladder and explicit closing swaps,
    mapping |x> to sum_y exp(2 pi i x y / 2^m)|y> / sqrt(2^m)."""
    qs = tuple(qubits)
    m = len(qs)
    if m < 1:
        raise ValueError("QFT needs at least one qubit")
    ops: list[GateOp] = []
    for j in range(m - 1, -1, -1):
        ops.append(GateOp(H, (qs[j],)))
        for k in range(j - 1, -1, -1):
            ops.append(GateOp(PHASE, (qs[j],), (qs[k],), math.pi / (1 << (j - k))))
    for j in range(m // 2):
        ops.append(GateOp(SWAP, (qs[j], qs[m - 1 - j])))
    return ops


def build_iqft(qubits: Sequence[int]) -> list[GateOp]:
    return invert_fragment(build_qft(qubits))


def _promote(target: int, angle: float, controls: tuple[int, ...]) -> GateOp:
    return GateOp(PHASE, (target,), controls, angle)


def build_phi_add(b_qubits: Sequence[int], constant: int,
                  controls: Sequence[int] = ()) -> list[GateOp]:
    """Fourier-basis adder: adds `constant` mod 2^m to a QFT-ed register.

    Diagonal in the computational basis: one phase rotation per target
    qubit, each promoted to a controlled phase per control qubit.
    """
    qs = tuple(b_qubits)
    ctl = tuple(controls)
    m = len(qs)
    if not 0 <= constant < (1 << m):
        raise ValueError(f"constant {constant} outside [0, 2^{m})")
    if len(ctl) > 2:
        raise ValueError("at most two control qubits")
    if constant == 0:
        return []
    ops = []
    for j, q in enumerate(qs):
        angle = (TWO_PI * constant * (1 << j) / (1 << m)) % TWO_PI
        ops.append(_promote(q, angle, ctl))
    return ops


def build_mod_add(b_qubits: Sequence[int], ancilla: int, constant: int, N: int,
                  controls: Sequence[int] = ()) -> list[GateOp]:
    """Modular adder |b> -> |(b + constant) mod N> in the Fourier basis.

    b must carry n+1 qubits (the top qubit prevents overflow) and hold a
    value below N; the ancilla starts and ends in |0>. Composition: add
    the constant, subtract N, detect underflow on the top qubit into the
    ancilla, re-add N conditioned on it, then uncompute the ancilla by
    comparing against the constant.
    """
    qs = tuple(b_qubits)
    ctl = tuple(controls)
    if ancilla is None:
        raise ValueError("modular adder requires an ancilla qubit")
    if not 0 <= constant < N:
        raise ValueError(f"constant {constant} outside [0, N={N})")
    if N >= (1 << (len(qs) - 1)):
        raise ValueError("b register too narrow for modulus")
    msb = qs[-1]
    ops: list[GateOp] = []
    ops += build_phi_add(qs, constant, ctl)
    ops += invert_fragment(build_phi_add(qs, N))
    ops += build_iqft(qs)
    ops.append(GateOp(CX, (ancilla,), (msb,)))
    ops += build_qft(qs)
    ops += build_phi_add(qs, N, (ancilla,))
    ops += invert_fragment(build_phi_add(qs, constant, ctl))
    ops += build_iqft(qs)
    ops.append(GateOp(X, (msb,)))
    ops.append(GateOp(CX, (ancilla,), (msb,)))
    ops.append(GateOp(X, (msb,)))
    ops += build_qft(qs)
    ops += build_phi_add(qs, constant, ctl)
    return ops


def _cmult_forward(layout: RegisterLayout, base: int, N: int) -> list[GateOp]:
    n = len(layout.x)
    ops = build_qft(layout.b)
    for j in range(n):
        ops += build_mod_add(layout.b, layout.ancilla, ((1 << j) * base) % N, N,
                             controls=(layout.control, layout.x[j]))
    ops += build_iqft(layout.b)
    return ops


def build_cmult(layout: RegisterLayout, params: ArithParams,
                direction: str = "forward") -> list[GateOp]:
    """Controlled multiplier: |x>|b> -> |x>|(b + a x) mod N> when the
    control is set; "inverse" subtracts a_inv * x instead."""
    if layout.variant != "original":
        raise ValueError("controlled multiplier needs the original layout")
    if len(layout.x) != params.n:
        raise ValueError("layout width does not match params")
    if direction == "forward":
        return _cmult_forward(layout, params.a, params.N)
    if direction == "inverse":
        return invert_fragment(_cmult_forward(layout, params.a_inv, params.N))
    raise ValueError(f"unknown direction {direction!r}")


def build_unitary_block_original(layout: RegisterLayout,
                                 params: ArithParams) -> list[GateOp]:
    """Controlled |x> -> |(a x) mod N> with b and ancilla restored to |0>:
    multiplier, controlled swap, inverse multiplier with a_inv."""
    ops = build_cmult(layout, params, "forward")
    for j in range(len(layout.x)):
        ops.append(GateOp(CSWAP, (layout.x[j], layout.b[j]), (layout.control,)))
    ops += build_cmult(layout, params, "inverse")
    return ops


def build_unitary_block_reduced(layout: RegisterLayout,
                                params: ArithParams) -> list[GateOp]:
    """Approximated unitary block on the 2n+1 layout.

    Hadamards stand in for the initial QFT on |b>=|0>; a single adder
    suffices because x starts at |1>; the closing QFT of the inverse
    multiplier is dropped; all arithmetic wraps mod 2^n instead of mod N,
    so b ends in garbage correlated with x by construction.
    """
    if layout.variant != "reduced":
        raise ValueError("reduced block needs the reduced layout")
    if len(layout.x) != params.n:
        raise ValueError("layout width does not match params")
    n = params.n
    mask = (1 << n) - 1
    ops: list[GateOp] = [GateOp(H, (q,)) for q in layout.b]
    ops += build_phi_add(layout.b, params.a & mask, controls=(layout.control,))
    ops += build_iqft(layout.b)
    for j in range(n):
        ops.append(GateOp(CSWAP, (layout.x[j], layout.b[j]), (layout.control,)))
    ops += build_qft(layout.b)
    for j in range(n):
        # constants reduced mod 2^n after the shift
        ops += invert_fragment(build_phi_add(
            layout.b, ((1 << j) * params.a_inv) & mask,
            controls=(layout.control, layout.x[j])))
    return ops
