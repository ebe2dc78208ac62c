"""Classical number theory: screening, modular arithmetic, continued
fractions, order recovery and factor extraction.

Everything here is pure and deterministic; primality is decided by trial
division because the targets are desk scale (N well below 10**6).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union


class RetryReason(str, Enum):
    ZERO_PHASE = "zero-phase"
    ODD_R = "odd-r"
    TRIVIAL_GCDS = "trivial-gcds"
    ORDER_CHECK_FAILED = "order-check-failed"


@dataclass(frozen=True)
class FactorOutcome:
    """Result of classical post-processing of one phase sample."""

    status: str  # "factored" | "trivial-screen" | "retry-needed"
    divisors: tuple[int, ...] = ()
    retry_reason: Optional[RetryReason] = None

    @property
    def ok(self) -> bool:
        return self.status in ("factored", "trivial-screen")


def _checked_divisor(d: int, N: int) -> int:
    if not (1 < d < N and N % d == 0):
        raise ValueError(f"{d} is not a nontrivial divisor of {N}")
    return d


def factored(d: int, N: int) -> FactorOutcome:
    d = _checked_divisor(d, N)
    return FactorOutcome("factored", (d, _checked_divisor(N // d, N)))


def trivial_screen(d: int, N: int) -> FactorOutcome:
    return FactorOutcome("trivial-screen", (_checked_divisor(d, N),))


def retry(reason: RetryReason) -> FactorOutcome:
    return FactorOutcome("retry-needed", (), reason)


def gcd(u: int, v: int) -> int:
    return math.gcd(u, v)


def mod_pow(base: int, exp: int, N: int) -> int:
    return pow(base, exp, N)


def mod_inv(a: int, N: int) -> int:
    if math.gcd(a, N) != 1:
        raise ValueError(f"{a} has no inverse mod {N}")
    return pow(a, -1, N)


def is_prime(N: int) -> bool:
    if N < 2:
        return False
    if N < 4:
        return True
    if N % 2 == 0:
        return False
    f = 3
    while f * f <= N:
        if N % f == 0:
            return False
        f += 2
    return True


def _integer_root(N: int, k: int) -> Optional[int]:
    r = round(N ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 2 and cand ** k == N:
            return cand
    return None


@dataclass(frozen=True)
class ScreenResult:
    status: str  # "composite-ok" | "even" | "prime-power" | "prime"
    divisor: Optional[int] = None
    base: Optional[int] = None
    exponent: Optional[int] = None


def screen(N: int) -> ScreenResult:
    """Preliminary checks: reject even numbers, primes and prime powers."""
    if N < 2:
        raise ValueError("N must be at least 2")
    if N == 2:
        return ScreenResult("prime")
    if N % 2 == 0:
        return ScreenResult("even", divisor=2)
    if is_prime(N):
        return ScreenResult("prime")
    for k in range(int(math.log2(N)), 1, -1):
        p = _integer_root(N, k)
        if p is not None:
            # largest exponent first, so the recovered base is prime
            return ScreenResult("prime-power", divisor=p, base=p, exponent=k)
    return ScreenResult("composite-ok")


def trial_division(N: int) -> Optional[int]:
    """Smallest factor by dividing by 2 then odd numbers up to sqrt(N);
    None when N is prime."""
    if N < 2:
        raise ValueError("N must be at least 2")
    if N % 2 == 0 and N > 2:
        return 2
    f = 3
    while f * f <= N:
        if N % f == 0:
            return f
        f += 2
    return None


@dataclass(frozen=True)
class Convergent:
    numerator: int
    denominator: int


def convergents(num: int, den: int) -> list[Convergent]:
    """Continued-fraction convergents of num/den, denominators increasing."""
    if den <= 0:
        raise ValueError("denominator must be positive")
    out: list[Convergent] = []
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    a, b = num, den
    while b:
        q = a // b
        a, b = b, a - q * b
        h_prev, h = h, q * h + h_prev
        k_prev, k = k, q * k + k_prev
        out.append(Convergent(h, k))
    return out


def multiplicative_order(a: int, N: int) -> int:
    if math.gcd(a, N) != 1:
        raise ValueError(f"gcd({a},{N}) != 1")
    r, v = 1, a % N
    while v != 1:
        v = (v * a) % N
        r += 1
    return r


def _divisors(q: int) -> list[int]:
    small, large = [], []
    f = 1
    while f * f <= q:
        if q % f == 0:
            small.append(f)
            if f != q // f:
                large.append(q // f)
        f += 1
    return small + large[::-1]


def _order_from_multiple(a: int, q: int, N: int) -> int:
    """Exact order of a given that a^q = 1 (mod N): minimal divisor of q
    that maps to 1."""
    for d in _divisors(q):
        if pow(a, d, N) == 1:
            return d
    raise ValueError(f"{a}^{q} != 1 mod {N}")


def recover_order(y: int, Q: int, a: int, N: int) -> Union[int, RetryReason]:
    """Verified order of a mod N from one phase sample y/Q.

    Walks the convergent denominators of y/Q in increasing order and
    returns the first q < N with a^q = 1 (mod N). The smallest verified
    denominator is the order itself; larger passing ones are multiples.
    """
    if not 0 <= y < Q:
        raise ValueError(f"y={y} outside [0, {Q})")
    if y == 0:
        return RetryReason.ZERO_PHASE
    for conv in convergents(y, Q):
        q = conv.denominator
        if q >= N:
            break
        if pow(a, q, N) == 1:
            return q
    return RetryReason.ORDER_CHECK_FAILED


def extract_factors(r: int, a: int, N: int) -> FactorOutcome:
    """Factors of N from the order r of a, via gcd(a^(r/2) -+ 1, N)."""
    if r < 1 or pow(a, r, N) != 1:
        raise ValueError(f"r={r} is not a multiple of the order of {a} mod {N}")
    if r % 2 == 1:
        return retry(RetryReason.ODD_R)
    half = pow(a, r // 2, N)
    candidates = [d for d in (math.gcd(half - 1, N), math.gcd(half + 1, N))
                  if 1 < d < N]
    if not candidates:
        return retry(RetryReason.TRIVIAL_GCDS)
    return factored(min(candidates), N)


def factor_from_phase(y: int, Q: int, a: int, N: int
                      ) -> tuple[FactorOutcome, Optional[int]]:
    """Full classical post-processing of one phase sample.

    Every convergent denominator 1 < q < N of y/Q is treated as a
    candidate order estimate: when q is even, gcd(a^(q/2) -+ 1, N) is
    tried directly, without requiring a^q = 1 first. An inexact estimate
    can therefore still factor (and an a whose true order is odd may
    factor through an even estimate). Returns the outcome and the
    candidate that produced the factors, if any.
    """
    if not 0 <= y < Q:
        raise ValueError(f"y={y} outside [0, {Q})")
    if y == 0:
        return retry(RetryReason.ZERO_PHASE), None
    saw_even = False
    for conv in convergents(y, Q):
        q = conv.denominator
        if q >= N:
            break
        if q <= 1:
            continue
        if q % 2 == 1:
            continue
        saw_even = True
        half = pow(a, q // 2, N)
        for d in (math.gcd(half - 1, N), math.gcd(half + 1, N)):
            if 1 < d < N:
                return factored(d, N), q
    return retry(RetryReason.TRIVIAL_GCDS if saw_even else RetryReason.ODD_R), None


def feasible_a(N: int) -> list[int]:
    """Bases that actually exercise the quantum circuit: 1 < a < N and
    gcd(a, N) = 1."""
    return [a for a in range(2, N) if math.gcd(a, N) == 1]
