"""End-to-end order-finding runs and the factorization loop.

Both variants measure 2n bits with the semiclassical inverse QFT: the
step measured first applies the highest power of the base and yields the
least significant bit of the phase integer y, so the bit from step s
carries weight 2^s. The feedback rotation before the step-s measurement
sums only the already-measured bits m_0 .. m_{s-1}.

The original variant is a single 2n+3-qubit circuit whose feedback runs
through classically conditioned phase gates; the reduced variant executes
2n separate 2n+1-qubit sub-circuits and carries the feedback across
circuit boundaries on the host.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .arithmetic import (ArithParams, RegisterLayout, build_unitary_block_original,
                         build_unitary_block_reduced, original_layout, reduced_layout)
from .circuit import CircuitSpec, GateOp, H, Measure, PHASE, Reset, X
from .classical import (FactorOutcome, RetryReason, ScreenResult, factor_from_phase,
                        factored, recover_order, screen, trivial_screen)
from .simulator import QuantumState, apply_gate, derive_seed, new_state, run

VARIANTS = ("original", "reduced")


@dataclass(frozen=True)
class PhaseSample:
    """The 2n measured bits of one iteration; bits[s] has weight 2^s."""

    bits: tuple[int, ...]
    bit_probabilities: tuple[float, ...]  # pre-measurement prob of each observed bit

    @property
    def y(self) -> int:
        return sum(b << s for s, b in enumerate(self.bits))

    @property
    def phase(self) -> float:
        return self.y / (1 << len(self.bits))


@dataclass(frozen=True)
class FeedbackAngle:
    step: int
    theta: float


def feedback_angle(step: int, bits: tuple[int, ...]) -> FeedbackAngle:
    """Rotation before the step-s measurement; sums measured bits only,
    so the angle for step 0 is always zero."""
    theta = -2.0 * math.pi * sum(
        bits[k] / (1 << (step - k + 1)) for k in range(step))
    return FeedbackAngle(step, theta)


def _step_params(N: int, a: int, n: int) -> list[ArithParams]:
    """Per-step block parameters: step s applies base a^(2^(2n-1-s)),
    computed by repeated squaring (largest exponent first)."""
    powers = []
    v = a % N
    for _ in range(2 * n):
        powers.append(v)
        v = (v * v) % N
    powers.reverse()
    return [ArithParams(N=N, a=v, n=n, a_inv=pow(v, -1, N)) for v in powers]


def build_original_circuit(N: int, a: int) -> tuple[CircuitSpec, RegisterLayout]:
    """One 2n+3-qubit circuit with in-circuit classical feedback."""
    params = ArithParams.create(N, a)
    n = params.n
    layout = original_layout(n)
    circ = CircuitSpec(layout.width, 2 * n)
    circ.append(GateOp(X, (layout.x[0],)))
    for s, step in enumerate(_step_params(N, a, n)):
        circ.append(Reset(layout.control))
        circ.append(GateOp(H, (layout.control,)))
        for g in build_unitary_block_original(layout, step):
            circ.append(g)
        for k in range(s):
            circ.append(GateOp(PHASE, (layout.control,),
                               angle=-2.0 * math.pi / (1 << (s - k + 1)),
                               condition=(k, 1)))
        circ.append(GateOp(H, (layout.control,)))
        circ.append(Measure(layout.control, s))
    return circ, layout


def run_original(N: int, a: int, seed: int) -> PhaseSample:
    circ, _ = build_original_circuit(N, a)
    _, record = run(circ, seed)
    bits = tuple(e.value for e in record.entries)
    probs = tuple(e.probability for e in record.entries)
    return PhaseSample(bits, probs)


def build_reduced_subcircuit(layout: RegisterLayout, step: ArithParams,
                             theta: float) -> CircuitSpec:
    """One of the 2n split sub-circuits: fresh registers, one reduced
    block, host-supplied feedback rotation, single measurement."""
    circ = CircuitSpec(layout.width, 1)
    circ.append(GateOp(X, (layout.x[0],)))
    circ.append(GateOp(H, (layout.control,)))
    for g in build_unitary_block_reduced(layout, step):
        circ.append(g)
    circ.append(GateOp(PHASE, (layout.control,), angle=theta))
    circ.append(GateOp(H, (layout.control,)))
    circ.append(Measure(layout.control, 0))
    return circ


def run_reduced(N: int, a: int, seed: int) -> PhaseSample:
    params = ArithParams.create(N, a)
    n = params.n
    layout = reduced_layout(n)
    bits: list[int] = []
    probs: list[float] = []
    for s, step in enumerate(_step_params(N, a, n)):
        theta = feedback_angle(s, tuple(bits)).theta
        circ = build_reduced_subcircuit(layout, step, theta)
        _, record = run(circ, derive_seed(seed, "sub", s))
        bits.append(record.entries[0].value)
        probs.append(record.entries[0].probability)
    return PhaseSample(tuple(bits), tuple(probs))


def phase_sample(N: int, a: int, variant: str, seed: int) -> PhaseSample:
    if variant == "original":
        return run_original(N, a, seed)
    if variant == "reduced":
        return run_reduced(N, a, seed)
    raise ValueError(f"unknown variant {variant!r}")


@dataclass(frozen=True)
class IterationOutcome:
    """One phase sample plus classical post-processing, no retries."""

    N: int
    a: int
    variant: str
    seed: int
    sample: Optional[PhaseSample]
    order: Optional[int]  # verified order, or the candidate that factored
    outcome: FactorOutcome

    @property
    def succeeded(self) -> bool:
        return self.outcome.ok


def single_iteration(N: int, a: int, variant: str, seed: int) -> IterationOutcome:
    if math.gcd(a, N) != 1:
        raise ValueError(f"gcd({a}, {N}) != 1")
    sample = phase_sample(N, a, variant, seed)
    n = N.bit_length()
    Q = 1 << (2 * n)
    outcome, candidate = factor_from_phase(sample.y, Q, a, N)
    verified = recover_order(sample.y, Q, a, N)
    order = verified if isinstance(verified, int) else candidate
    return IterationOutcome(N, a, variant, seed, sample, order, outcome)


@dataclass
class FactorResult:
    N: int
    variant: str
    screen: ScreenResult
    outcome: Optional[FactorOutcome]  # None when prime or iterations exhausted
    iterations: list[IterationOutcome]

    @property
    def succeeded(self) -> bool:
        return self.outcome is not None and self.outcome.ok

    @property
    def factors(self) -> tuple[int, ...]:
        return self.outcome.divisors if self.outcome else ()


def factor(N: int, variant: str = "reduced", max_iterations: int = 10,
           seed: int = 0, first_a: Optional[int] = None) -> FactorResult:
    """Full factorization loop: screen, then up to max_iterations
    single-shot order-finding attempts, redrawing a on every retry.

    first_a pins the base of the first iteration only; retries fall back
    to fresh random draws, matching the restart-from-step-2 loop.
    """
    if N < 3:
        raise ValueError("N must be at least 3")
    scr = screen(N)
    if scr.status in ("even", "prime-power"):
        return FactorResult(N, variant, scr, trivial_screen(scr.divisor, N), [])
    if scr.status == "prime":
        return FactorResult(N, variant, scr, None, [])
    rng = np.random.default_rng(derive_seed(seed, "factor", N, variant))
    iterations: list[IterationOutcome] = []
    for i in range(max_iterations):
        if i == 0 and first_a is not None:
            a = first_a
        else:
            a = int(rng.integers(2, N))
        d = math.gcd(a, N)
        if d > 1:
            outcome = factored(d, N)
            iterations.append(IterationOutcome(N, a, variant, 0, None, None, outcome))
            return FactorResult(N, variant, scr, outcome, iterations)
        it = single_iteration(N, a, variant, derive_seed(seed, "iter", N, variant, i, a))
        iterations.append(it)
        if it.succeeded:
            return FactorResult(N, variant, scr, it.outcome, iterations)
    return FactorResult(N, variant, scr, None, iterations)


def exact_phase_distribution(N: int, a: int, variant: str = "original",
                             cutoff: float = 1e-12) -> dict[int, float]:
    """Exact y-distribution of one iteration, from statevector
    probabilities: explores both branches of every mid-circuit
    measurement, pruning branches below the cutoff probability.

    Branch count can grow exponentially for orders that do not divide
    2^(2n); intended for desk-scale spot checks.
    """
    params = ArithParams.create(N, a)
    n = params.n
    steps = _step_params(N, a, n)
    if variant == "original":
        layout = original_layout(n)
    elif variant == "reduced":
        layout = reduced_layout(n)
    else:
        raise ValueError(f"unknown variant {variant!r}")

    def fresh_state() -> QuantumState:
        st = new_state(layout.width, 0, 0)
        apply_gate(st, GateOp(X, (layout.x[0],)))
        return st

    def step_through(st: QuantumState, s: int, bits: tuple[int, ...]) -> QuantumState:
        apply_gate(st, GateOp(H, (layout.control,)))
        if variant == "original":
            block = build_unitary_block_original(layout, steps[s])
        else:
            block = build_unitary_block_reduced(layout, steps[s])
        for g in block:
            apply_gate(st, g)
        theta = feedback_angle(s, bits).theta
        if theta:
            apply_gate(st, GateOp(PHASE, (layout.control,), angle=theta))
        apply_gate(st, GateOp(H, (layout.control,)))
        return st

    dist: dict[int, float] = {}
    # branches: (probability, measured bits, state with control back in |0>)
    branches: list[tuple[float, tuple[int, ...], QuantumState]] = [(1.0, (), fresh_state())]
    for s in range(2 * n):
        nxt: list[tuple[float, tuple[int, ...], QuantumState]] = []
        for prob, bits, st in branches:
            if variant == "reduced":
                st = fresh_state()
            step_through(st, s, bits)
            p1 = st.probability_of_one(layout.control)
            for outcome, p in ((0, 1.0 - p1), (1, p1)):
                branch_p = prob * p
                if branch_p <= cutoff:
                    continue
                sub = QuantumState(layout.width, 0, st.rng)
                sub.amplitudes = st.amplitudes.copy()
                sub._slice([(layout.control, 1 - outcome)])[...] = 0.0
                sub.amplitudes /= math.sqrt(sub.norm())
                if outcome:
                    apply_gate(sub, GateOp(X, (layout.control,)))
                nxt.append((branch_p, bits + (outcome,), sub))
        branches = nxt
    for prob, bits, _ in branches:
        y = sum(b << s for s, b in enumerate(bits))
        dist[y] = dist.get(y, 0.0) + prob
    return dist
