"""Optimality gap and primal integral: worked examples are exact."""

import pytest

from dpsearch.metrics import optimality_gap, primal_gap, primal_integral


class TestOptimalityGap:
    def test_both_zero(self):
        assert optimality_gap(0, 0) == 0.0

    def test_half(self):
        assert optimality_gap(10, 5) == 0.5

    def test_missing_dual(self):
        assert optimality_gap(6, None) == 1.0

    def test_missing_primal(self):
        assert optimality_gap(None, 6) == 1.0

    def test_proved(self):
        assert optimality_gap(6, 6) == 0.0

    def test_negative_pair(self):
        assert optimality_gap(-5, -10) == 0.5


class TestPrimalIntegral:
    def test_optimal_at_start(self):
        assert primal_integral([(0.0, 5)], reference=5, horizon=10) == 0.0

    def test_no_events(self):
        assert primal_integral([], reference=5, horizon=10) == 10.0

    def test_worked_example(self):
        # gap-0.5 solution at t=2, the optimum at t=6, horizon 10:
        # 1*2 + 0.5*4 + 0*4 = 4
        events = [(2.0, 10), (6.0, 5)]
        assert primal_integral(events, reference=5, horizon=10) == 4.0

    def test_infeasibility_proof_zeroes_the_gap(self):
        assert primal_integral([(4.0, None)], reference=5, horizon=10) == 4.0

    def test_event_outside_horizon_rejected(self):
        with pytest.raises(ValueError):
            primal_integral([(11.0, 5)], reference=5, horizon=10)

    def test_decreasing_times_rejected(self):
        with pytest.raises(ValueError):
            primal_integral([(5.0, 9), (4.0, 8)], reference=5, horizon=10)


def test_primal_gap_zero_reference():
    assert primal_gap(0, 0) == 0.0
    assert primal_gap(None, 5) == 1.0
    assert primal_gap(10, 5) == 0.5
