"""Run-quality metrics: optimality gap and primal integral."""

from __future__ import annotations

from typing import Optional, Sequence, Union

Number = Union[int, float]


def optimality_gap(primal: Optional[Number], dual: Optional[Number]) -> float:
    """Relative difference between primal and dual bounds, in [0, 1].

    Missing either bound counts as a gap of 1.  Note that a proved
    infeasibility is a gap of 0 by convention; callers must special-case
    it since both bounds are absent then.
    """
    if primal is None or dual is None:
        return 1.0
    if primal == dual:
        return 0.0
    return abs(primal - dual) / max(abs(primal), abs(dual))


def primal_gap(cost: Optional[Number], reference: Number) -> float:
    """Gap of a single solution against a reference cost, in [0, 1]."""
    if cost is None:
        return 1.0
    if cost == reference == 0:
        return 0.0
    if cost == reference:
        return 0.0
    return abs(reference - cost) / max(abs(reference), abs(cost))


def primal_integral(
    events: Sequence[tuple[float, Optional[Number]]],
    reference: Number,
    horizon: float,
) -> float:
    """Time integral of the piecewise-constant primal gap over [0, horizon].

    ``events`` holds (time, cost) pairs with non-decreasing times; a cost
    of None marks a proved infeasibility, after which the gap is 0.  The
    result lies in [0, horizon]; lower is better.
    """
    last_time = 0.0
    gap = 1.0
    total = 0.0
    for time, cost in events:
        if not 0.0 <= time <= horizon:
            raise ValueError(f"event time {time} outside [0, {horizon}]")
        if time < last_time:
            raise ValueError("event times must be non-decreasing")
        total += gap * (time - last_time)
        last_time = time
        gap = 0.0 if cost is None else primal_gap(cost, reference)
    total += gap * (horizon - last_time)
    return total
