"""Repeatable experiment drivers: success-probability sweeps over all
feasible bases, phase histograms, and depth reports.

Every stochastic cell draws its seed from a hash of (master seed, N, a,
variant, repetition index), so results do not depend on execution order
and identical configs reproduce byte-identical output files.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .classical import factor_from_phase, feasible_a
from .driver import VARIANTS, build_original_circuit, build_reduced_subcircuit, \
    single_iteration, _step_params
from .arithmetic import original_layout, reduced_layout
from .simulator import derive_seed
from .transpile import DepthReport, report_for

SWEEP_HEADER = "N,a,variant,successes,repetitions,success_probability"
PHASES_HEADER = "y,count,factored"


@dataclass
class SweepCell:
    """One heat-map cell: repeated single iterations at fixed (N, a)."""

    N: int
    a: int
    variant: str
    successes: int
    repetitions: int
    retry_reasons: list[str] = field(default_factory=list)  # one per failure

    def __post_init__(self):
        if not 0 <= self.successes <= self.repetitions:
            raise ValueError("successes outside [0, repetitions]")

    @property
    def success_probability(self) -> float:
        return self.successes / self.repetitions


def run_cell(N: int, a: int, variant: str, repetitions: int,
             master_seed: int) -> SweepCell:
    successes = 0
    reasons: list[str] = []
    for rep in range(repetitions):
        seed = derive_seed(master_seed, N, a, variant, rep)
        it = single_iteration(N, a, variant, seed)
        if it.succeeded:
            successes += 1
        else:
            reasons.append(it.outcome.retry_reason.value)
    return SweepCell(N, a, variant, successes, repetitions, reasons)


def run_sweep(N_values: Sequence[int], variants: Sequence[str],
              repetitions: int, master_seed: int,
              workers: Optional[int] = None) -> list[SweepCell]:
    """All feasible (N, a, variant) cells, rows sorted by (N, a, variant).

    workers > 1 fans cells out to a process pool; ordering of results is
    fixed by the final sort either way.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    for v in variants:
        if v not in VARIANTS:
            raise ValueError(f"unknown variant {v!r}")
    jobs = [(N, a, v, repetitions, master_seed)
            for N in sorted(set(N_values))
            for a in feasible_a(N)
            for v in variants]
    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_run_cell_job, jobs, chunksize=1))
    else:
        cells = [run_cell(*job) for job in jobs]
    cells.sort(key=lambda c: (c.N, c.a, c.variant))
    return cells


def _run_cell_job(job) -> SweepCell:
    return run_cell(*job)


def sweep_csv(cells: Sequence[SweepCell]) -> str:
    """Fixed header and column order, LF line endings."""
    lines = [SWEEP_HEADER]
    for c in cells:
        lines.append(f"{c.N},{c.a},{c.variant},{c.successes},"
                     f"{c.repetitions},{c.success_probability:.6f}")
    return "\n".join(lines) + "\n"


def sweep_details(cells: Sequence[SweepCell], repetitions: int,
                  master_seed: int) -> dict:
    """JSON-ready companion to the CSV, including per-cell retry reasons."""
    return {
        "master_seed": master_seed,
        "repetitions": repetitions,
        "cells": [
            {"N": c.N, "a": c.a, "variant": c.variant,
             "successes": c.successes, "repetitions": c.repetitions,
             "success_probability": c.success_probability,
             "retry_reasons": list(c.retry_reasons)}
            for c in cells
        ],
    }


def mean_success(cells: Sequence[SweepCell], N: int, variant: str) -> float:
    probs = [c.success_probability for c in cells
             if c.N == N and c.variant == variant]
    if not probs:
        raise ValueError(f"no cells for N={N}, variant={variant}")
    return sum(probs) / len(probs)


@dataclass
class PhaseHistogram:
    """Observed y values of repeated iterations at fixed (N, a, variant)."""

    N: int
    a: int
    variant: str
    shots: int
    counts: dict[int, int]

    def sorted_rows(self) -> list[tuple[int, int, bool]]:
        """(y, count, factored) rows, descending count then ascending y."""
        Q = 1 << (2 * self.N.bit_length())
        rows = []
        for y, cnt in self.counts.items():
            ok = factor_from_phase(y, Q, self.a, self.N)[0].ok
            rows.append((y, cnt, ok))
        rows.sort(key=lambda r: (-r[1], r[0]))
        return rows


def collect_phases(N: int, a: int, variant: str, shots: int,
                   master_seed: int) -> PhaseHistogram:
    if shots < 1:
        raise ValueError("shots must be at least 1")
    counts: dict[int, int] = {}
    for shot in range(shots):
        seed = derive_seed(master_seed, N, a, variant, shot)
        it = single_iteration(N, a, variant, seed)
        y = it.sample.y
        counts[y] = counts.get(y, 0) + 1
    return PhaseHistogram(N, a, variant, shots, counts)


def phases_csv(hist: PhaseHistogram) -> str:
    lines = [PHASES_HEADER]
    for y, cnt, ok in hist.sorted_rows():
        lines.append(f"{y},{cnt},{int(ok)}")
    return "\n".join(lines) + "\n"


def depth_report(N: int, variant: str, a: Optional[int] = None) -> DepthReport:
    """Transpiled depth of the executed circuits for one N.

    Uses the smallest feasible base when a is not given; feedback angles
    are fixed at zero, which cannot change the depth (every feedback
    rotation is a single rz layer either way).
    """
    if a is None:
        a = feasible_a(N)[0]
    n = N.bit_length()
    if variant == "original":
        circ, _ = build_original_circuit(N, a)
        return report_for([circ], n, variant)
    if variant == "reduced":
        layout = reduced_layout(n)
        circs = [build_reduced_subcircuit(layout, step, 0.0)
                 for step in _step_params(N, a, n)]
        return report_for(circs, n, variant)
    raise ValueError(f"unknown variant {variant!r}")
