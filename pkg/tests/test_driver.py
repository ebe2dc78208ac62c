import math

import pytest

from shorsim.classical import RetryReason
from shorsim.driver import (PhaseSample, build_original_circuit,
                            build_reduced_subcircuit, exact_phase_distribution,
                            factor, feedback_angle, phase_sample, run_original,
                            run_reduced, single_iteration, _step_params)
from shorsim.arithmetic import reduced_layout


class TestPhaseSample:
    def test_bit_weights(self):
        s = PhaseSample((0, 1, 1, 0), (0.5, 0.5, 0.5, 0.5))
        assert s.y == 6  # bits[s] carries weight 2^s
        assert s.phase == pytest.approx(6 / 16)


class TestFeedback:
    def test_first_step_zero(self):
        assert feedback_angle(0, ()).theta == 0.0

    def test_single_prior_bit(self):
        # one measured 1 at step 0 rotates by -2pi/4
        assert feedback_angle(1, (1,)).theta == pytest.approx(-math.pi / 2)

    def test_accumulates(self):
        # bits (1, 1) before step 2: -2pi(1/8 + 1/4)
        theta = feedback_angle(2, (1, 1)).theta
        assert theta == pytest.approx(-2 * math.pi * 0.375)

    def test_zero_bits_no_rotation(self):
        assert feedback_angle(3, (0, 0, 0)).theta == 0.0


class TestStepParams:
    def test_power_ordering(self):
        # step s applies a^(2^(2n-1-s)); largest exponent first
        bases = [p.a for p in _step_params(15, 7, 4)]
        assert bases == [1, 1, 1, 1, 1, 1, 4, 7]

    def test_last_step_is_base(self):
        assert _step_params(21, 2, 5)[-1].a == 2

    def test_inverses_consistent(self):
        for p in _step_params(33, 10, 6):
            assert (p.a * p.a_inv) % 33 == 1


class TestCircuitShapes:
    def test_original_widths(self):
        circ, layout = build_original_circuit(15, 7)
        assert circ.qubit_count == 11  # 2n+3 at n=4
        assert circ.classical_bit_count == 8
        circ.validate()

    def test_reduced_widths(self):
        layout = reduced_layout(4)
        circ = build_reduced_subcircuit(layout, _step_params(15, 7, 4)[0], 0.0)
        assert circ.qubit_count == 9  # 2n+1 at n=4
        assert circ.classical_bit_count == 1
        circ.validate()

    def test_original_measures_2n_bits(self):
        circ, _ = build_original_circuit(21, 2)
        from shorsim.circuit import Measure
        assert sum(isinstance(op, Measure) for op in circ.ops) == 10


class TestRuns:
    def test_original_deterministic(self):
        a = run_original(15, 7, 123)
        b = run_original(15, 7, 123)
        assert a == b
        assert len(a.bits) == 8

    def test_reduced_deterministic(self):
        a = run_reduced(15, 7, 123)
        assert a == run_reduced(15, 7, 123)
        assert all(0.0 <= p <= 1.0 for p in a.bit_probabilities)

    def test_phase_sample_dispatch(self):
        assert phase_sample(15, 7, "reduced", 5) == run_reduced(15, 7, 5)
        with pytest.raises(ValueError):
            phase_sample(15, 7, "optimized", 5)


class TestExactDistribution:
    def test_order_two_base(self):
        # order of 4 mod 15 is 2: phase mass splits over {0, 128}
        dist = exact_phase_distribution(15, 4, "original")
        assert set(dist) == {0, 128}
        assert dist[0] == pytest.approx(0.5, abs=1e-9)
        assert dist[128] == pytest.approx(0.5, abs=1e-9)

    def test_reduced_matches_original_for_dyadic_order(self):
        a = exact_phase_distribution(15, 4, "original")
        b = exact_phase_distribution(15, 4, "reduced")
        assert set(a) == set(b)
        for y in a:
            assert a[y] == pytest.approx(b[y], abs=1e-9)


class TestSingleIteration:
    def test_success_case(self):
        it = single_iteration(15, 7, "reduced", 0)
        assert it.succeeded
        assert it.sample.y == 64
        assert it.order == 4
        assert it.outcome.divisors == (3, 5)

    def test_zero_phase_retry(self):
        it = single_iteration(15, 7, "reduced", 1)
        assert not it.succeeded
        assert it.sample.y == 0
        assert it.outcome.retry_reason == RetryReason.ZERO_PHASE

    def test_rejects_non_coprime(self):
        with pytest.raises(ValueError):
            single_iteration(15, 5, "reduced", 0)


class TestFactorLoop:
    def test_factors_15(self):
        res = factor(15, "reduced", seed=3)
        assert res.succeeded
        assert res.factors == (3, 5)
        assert res.screen.status == "composite-ok"

    def test_factors_21(self):
        res = factor(21, "reduced", seed=0)
        assert res.factors == (3, 7)

    def test_even_shortcut(self):
        res = factor(16, "reduced")
        assert res.succeeded
        assert res.outcome.status == "trivial-screen"
        assert res.outcome.divisors == (2,)
        assert res.iterations == []

    def test_prime_power_shortcut(self):
        res = factor(27, "reduced")
        assert res.outcome.divisors == (3,)

    def test_prime_gives_nothing(self):
        res = factor(13, "reduced")
        assert not res.succeeded
        assert res.outcome is None
        assert res.factors == ()

    def test_first_a_pins_first_iteration(self):
        res = factor(15, "reduced", seed=1, first_a=7)
        assert res.iterations[0].a == 7

    def test_gcd_shortcut_on_lucky_draw(self):
        res = factor(15, "reduced", seed=0, first_a=6)  # gcd(6,15)=3
        assert res.succeeded
        assert res.factors == (3, 5)
        assert res.iterations[0].sample is None

    def test_too_small(self):
        with pytest.raises(ValueError):
            factor(2, "reduced")
