import math

import numpy as np
import pytest

from shorsim.circuit import (CSWAP, CX, H, ID, PHASE, RZ, SWAP, SX, X,
                             CapacityError, CircuitSpec, GateOp, Measure,
                             Reset, invert_fragment)
from shorsim.simulator import (MAX_QUBITS, apply_gate, derive_seed, measure,
                               new_state, reset, run, states_equal)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def state_after(ops, nq, start=0, seed=0):
    st = new_state(nq, 0, seed)
    st.amplitudes[0] = 0.0
    st.amplitudes[start] = 1.0
    for g in ops:
        apply_gate(st, g)
    return st


class TestGateOpValidation:
    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            GateOp("foo", (0,))

    def test_target_arity(self):
        with pytest.raises(ValueError):
            GateOp(SWAP, (0,))

    def test_control_arity(self):
        with pytest.raises(ValueError):
            GateOp(H, (0,), (1,))

    def test_phase_control_range(self):
        GateOp(PHASE, (0,), (1, 2), 0.5)  # two controls allowed
        with pytest.raises(ValueError):
            GateOp(PHASE, (0,), (1, 2, 3), 0.5)

    def test_overlapping_qubits(self):
        with pytest.raises(ValueError):
            GateOp(CX, (0,), (0,))

    def test_angle_required(self):
        with pytest.raises(ValueError):
            GateOp(PHASE, (0,))
        with pytest.raises(ValueError):
            GateOp(RZ, (0,), angle=float("nan"))

    def test_angle_forbidden(self):
        with pytest.raises(ValueError):
            GateOp(H, (0,), angle=1.0)


class TestSingleQubitGates:
    def test_h_on_zero(self):
        st = state_after([GateOp(H, (0,))], 1)
        assert np.allclose(st.amplitudes, [INV_SQRT2, INV_SQRT2])

    def test_h_on_one(self):
        st = state_after([GateOp(H, (0,))], 1, start=1)
        assert np.allclose(st.amplitudes, [INV_SQRT2, -INV_SQRT2])

    def test_h_involution(self):
        st = state_after([GateOp(H, (0,)), GateOp(H, (0,))], 1, start=1)
        assert np.allclose(st.amplitudes, [0.0, 1.0])

    def test_x(self):
        st = state_after([GateOp(X, (0,))], 1)
        assert np.allclose(st.amplitudes, [0.0, 1.0])

    def test_sx_squared_is_x(self):
        st = state_after([GateOp(SX, (0,)), GateOp(SX, (0,))], 1)
        assert states_equal(st.amplitudes, [0.0, 1.0])

    def test_sx_matrix(self):
        # columns of the sx unitary: [(1+i)/2, (1-i)/2; (1-i)/2, (1+i)/2]
        st = state_after([GateOp(SX, (0,))], 1)
        assert np.allclose(st.amplitudes, [0.5 + 0.5j, 0.5 - 0.5j])

    def test_phase_acts_on_one_only(self):
        theta = 0.731
        st = state_after([GateOp(H, (0,)), GateOp(PHASE, (0,), angle=theta)], 1)
        assert np.allclose(st.amplitudes,
                           [INV_SQRT2, INV_SQRT2 * np.exp(1j * theta)])

    def test_rz_phase_pair(self):
        theta = 1.234
        st = state_after([GateOp(H, (0,)), GateOp(RZ, (0,), angle=theta)], 1)
        expected = [INV_SQRT2 * np.exp(-0.5j * theta),
                    INV_SQRT2 * np.exp(0.5j * theta)]
        assert np.allclose(st.amplitudes, expected)

    def test_rz_equals_phase_up_to_global(self):
        theta = 0.41
        a = state_after([GateOp(H, (0,)), GateOp(RZ, (0,), angle=theta)], 1)
        b = state_after([GateOp(H, (0,)), GateOp(PHASE, (0,), angle=theta)], 1)
        assert states_equal(a.amplitudes, b.amplitudes)

    def test_id_is_noop(self):
        st = state_after([GateOp(H, (0,)), GateOp(ID, (0,))], 1)
        assert np.allclose(st.amplitudes, [INV_SQRT2, INV_SQRT2])


class TestMultiQubitGates:
    def test_cx_truth_table(self):
        # qubit 0 is the low bit of the index
        for start, expect in [(0, 0), (1, 3), (2, 2), (3, 1)]:
            st = state_after([GateOp(CX, (1,), (0,))], 2, start=start)
            assert np.argmax(np.abs(st.amplitudes)) == expect

    def test_swap(self):
        st = state_after([GateOp(SWAP, (0, 1))], 2, start=1)
        assert np.allclose(st.amplitudes, [0, 0, 1, 0])

    def test_cswap(self):
        # control qubit 2 set: basis 0b101 -> 0b110
        st = state_after([GateOp(CSWAP, (0, 1), (2,))], 3, start=0b101)
        assert np.argmax(np.abs(st.amplitudes)) == 0b110
        st = state_after([GateOp(CSWAP, (0, 1), (2,))], 3, start=0b001)
        assert np.argmax(np.abs(st.amplitudes)) == 0b001

    def test_controlled_phase_diagonal(self):
        theta = 0.9
        ops = [GateOp(H, (0,)), GateOp(H, (1,)),
               GateOp(PHASE, (1,), (0,), theta)]
        st = state_after(ops, 2)
        expected = np.array([1, 1, 1, np.exp(1j * theta)]) / 2.0
        assert np.allclose(st.amplitudes, expected)

    def test_doubly_controlled_phase(self):
        theta = -1.1
        ops = [GateOp(H, (q,)) for q in range(3)]
        ops.append(GateOp(PHASE, (2,), (0, 1), theta))
        st = state_after(ops, 3)
        expected = np.full(8, 1 / math.sqrt(8), dtype=complex)
        expected[7] *= np.exp(1j * theta)
        assert np.allclose(st.amplitudes, expected)


class TestInversion:
    def test_fragment_roundtrip(self):
        ops = [GateOp(H, (0,)), GateOp(SX, (1,)), GateOp(CX, (1,), (0,)),
               GateOp(PHASE, (1,), (0,), 0.3), GateOp(RZ, (0,), angle=-.7),
               GateOp(SWAP, (0, 2)), GateOp(CSWAP, (1, 2), (0,))]
        st = state_after(ops + invert_fragment(ops), 3, start=5)
        expected = np.zeros(8); expected[5] = 1.0
        assert states_equal(st.amplitudes, expected)

    def test_invert_rejects_measure(self):
        with pytest.raises(ValueError):
            invert_fragment([Measure(0, 0)])


class TestMeasurementAndReset:
    def test_deterministic_outcome(self):
        st = new_state(1, 1, 0)
        apply_gate(st, GateOp(X, (0,)))
        assert measure(st, 0, 0) == 1
        assert st.classical_bits[0] == 1
        entry = st.record.entries[0]
        assert entry.probability == pytest.approx(1.0)

    def test_collapse_renormalizes(self):
        st = new_state(2, 1, 3)
        apply_gate(st, GateOp(H, (0,)))
        apply_gate(st, GateOp(CX, (1,), (0,)))
        out = measure(st, 0, 0)
        assert st.norm() == pytest.approx(1.0)
        # entangled partner collapses with it
        assert np.argmax(np.abs(st.amplitudes)) == (3 if out else 0)

    def test_measurement_statistics(self):
        ones = 0
        for seed in range(400):
            st = new_state(1, 1, seed)
            apply_gate(st, GateOp(H, (0,)))
            ones += measure(st, 0, 0)
        assert 140 <= ones <= 260  # ~5 sigma around 200

    def test_reset_from_one(self):
        st = new_state(1, 0, 0)
        apply_gate(st, GateOp(X, (0,)))
        reset(st, 0)
        assert np.allclose(st.amplitudes, [1.0, 0.0])

    def test_reset_superposition(self):
        st = new_state(2, 0, 1)
        apply_gate(st, GateOp(H, (0,)))
        apply_gate(st, GateOp(H, (1,)))
        reset(st, 0)
        assert st.probability_of_one(0) == pytest.approx(0.0)
        assert st.probability_of_one(1) == pytest.approx(0.5)

    def test_reset_leaves_no_record(self):
        st = new_state(1, 0, 0)
        reset(st, 0)
        assert len(st.record) == 0


class TestConditions:
    def test_condition_met_and_unmet(self):
        circ = CircuitSpec(2, 1)
        circ.append(GateOp(X, (0,)), Measure(0, 0),
                    GateOp(X, (1,), condition=(0, 1)))
        st, rec = run(circ, 0)
        assert rec.bit_values() == {0: 1}
        assert np.argmax(np.abs(st.amplitudes)) == 0b11

        circ = CircuitSpec(2, 1)
        circ.append(Measure(0, 0), GateOp(X, (1,), condition=(0, 1)))
        st, _ = run(circ, 0)
        assert np.argmax(np.abs(st.amplitudes)) == 0b00

    def test_condition_before_write_rejected(self):
        circ = CircuitSpec(1, 1)
        circ.append(GateOp(X, (0,), condition=(0, 1)))
        with pytest.raises(ValueError):
            circ.validate()

    def test_condition_bit_range(self):
        circ = CircuitSpec(1, 1)
        circ.append(Measure(0, 0), GateOp(X, (0,), condition=(3, 1)))
        with pytest.raises(ValueError):
            circ.validate()


class TestCapacityAndSeeds:
    def test_qubit_cap(self):
        with pytest.raises(CapacityError):
            new_state(MAX_QUBITS + 1, 0, 0)
        with pytest.raises(CapacityError):
            new_state(0, 0, 0)

    def test_run_is_deterministic(self):
        circ = CircuitSpec(3, 3)
        for q in range(3):
            circ.append(GateOp(H, (q,)), Measure(q, q))
        _, rec_a = run(circ, 17)
        _, rec_b = run(circ, 17)
        assert rec_a.bit_values() == rec_b.bit_values()

    def test_derive_seed_stable_and_distinct(self):
        assert derive_seed(1, "x", 2) == derive_seed(1, "x", 2)
        seeds = {derive_seed(1, "x", i) for i in range(100)}
        assert len(seeds) == 100

    def test_norm_preserved_through_run(self):
        circ = CircuitSpec(4, 2)
        circ.append(GateOp(H, (0,)), GateOp(CX, (1,), (0,)),
                    GateOp(SX, (2,)), Measure(0, 0), Reset(2),
                    GateOp(SWAP, (1, 3)), Measure(3, 1))
        st, _ = run(circ, 5)
        assert st.norm() == pytest.approx(1.0, abs=1e-10)


class TestStatesEqual:
    def test_global_phase_ignored(self):
        v = np.array([0.6, 0.8j])
        assert states_equal(v, v * np.exp(0.3j))

    def test_distinct_states(self):
        assert not states_equal([1, 0], [0, 1])
