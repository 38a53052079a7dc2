"""Traveling salesperson with time windows.

State: unvisited customers U, current location i, current time t (less
preferred).  One transition per customer visits it within its window;
the tour ends back at the depot once U is empty.  State constraints cut
states from which some unvisited customer can no longer be reached by
its deadline even via shortest paths, and two bound expressions sum the
cheapest incoming/outgoing edges over the remaining customers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .. import bitset
from .. import expressions as ex
from ..model import (
    CostStructure,
    ELEMENT,
    INTEGER,
    LESS,
    Model,
    SET,
    StateMetadata,
    Transition,
    BaseCase,
    Variable,
)
from . import common as c


@dataclass(frozen=True)
class TsptwInstance:
    """Customer 0 is the depot; travel times are integral and complete."""

    travel: tuple[tuple[int, ...], ...]
    ready: tuple[int, ...]
    deadline: tuple[int, ...]

    def __post_init__(self):
        n = len(self.travel)
        if n == 0:
            raise ValueError("instance needs at least the depot")
        for row in self.travel:
            if len(row) != n:
                raise ValueError("travel matrix must be square")
            for value in row:
                if not isinstance(value, int) or value < 0:
                    raise ValueError("travel times must be nonnegative integers")
        if len(self.ready) != n or len(self.deadline) != n:
            raise ValueError("time windows must cover every customer")

    @property
    def n(self) -> int:
        return len(self.travel)

    @cached_property
    def shortest(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(row) for row in c.floyd_warshall([list(r) for r in self.travel]))

    @cached_property
    def cheapest_in(self) -> tuple[int, ...]:
        if self.n == 1:
            return (0,)
        return tuple(c.min_incoming([list(r) for r in self.travel]))

    @cached_property
    def cheapest_out(self) -> tuple[int, ...]:
        if self.n == 1:
            return (0,)
        return tuple(c.min_outgoing([list(r) for r in self.travel]))


def parse_tsptw(text: str) -> TsptwInstance:
    """Parse the plain text form: the customer count, then the travel
    matrix one row per line, then one ``ready deadline`` line per
    customer."""
    fields = text.split()
    if not fields:
        raise ValueError("empty instance text")
    cursor = iter(fields)
    try:
        n = int(next(cursor))
        travel = tuple(
            tuple(int(next(cursor)) for _ in range(n)) for _ in range(n)
        )
        windows = tuple(
            (int(next(cursor)), int(next(cursor))) for _ in range(n)
        )
    except StopIteration:
        raise ValueError("truncated instance text") from None
    return TsptwInstance(
        travel=travel,
        ready=tuple(w[0] for w in windows),
        deadline=tuple(w[1] for w in windows),
    )


def build_tsptw(instance: TsptwInstance) -> Model:
    n = instance.n
    meta = StateMetadata(
        {"customer": n},
        [
            Variable("U", SET, "customer"),
            Variable("i", ELEMENT, "customer"),
            Variable("t", INTEGER, preference=LESS),
        ],
    )
    tables = ex.TableRegistry(
        [
            c.matrix_table("c", instance.travel),
            c.matrix_table("cstar", instance.shortest),
            c.vector_table("a", instance.ready),
            c.vector_table("b", instance.deadline),
            c.vector_table("cin", instance.cheapest_in),
            c.vector_table("cout", instance.cheapest_out),
        ]
    )
    U = meta.set_("U")
    i = meta.element("i")
    t = meta.numeric("t")

    transitions = []
    for j in range(1, n):
        ej = c.econst(j)
        arrival = c.add(t, c.ntab("c", i, ej))
        transitions.append(
            Transition(
                name=f"visit-{j}",
                preconditions=(
                    c.member(j, U),
                    c.le(arrival, c.ntab("b", ej)),
                ),
                effects=(
                    (meta.index("U"), ex.SetRemove(ej, U)),
                    (meta.index("i"), ej),
                    (meta.index("t"), c.nmax(arrival, c.ntab("a", ej))),
                ),
                weight=c.ntab("c", i, ej),
            )
        )

    constraints = [
        c.or_(
            c.not_(c.member(j, U)),
            c.le(c.add(t, c.ntab("cstar", i, c.econst(j))), c.ntab("b", c.econst(j))),
        )
        for j in range(1, n)
    ]

    return Model(
        metadata=meta,
        tables=tables,
        target=(bitset.from_items(range(1, n), n), 0, 0),
        transitions=transitions,
        base_cases=[
            BaseCase((c.empty(U),), c.ntab("c", i, c.econst(0))),
        ],
        constraints=constraints,
        dual_bounds=[
            c.add(c.sum_over("cin", U), c.ntab("cin", c.econst(0))),
            c.add(c.sum_over("cout", U), c.ntab("cout", i)),
        ],
        costs=CostStructure(operator="+", direction="min", cost_type="integer"),
        acyclic=True,
    )
