"""One-to-one multi-commodity pickup-and-delivery TSP.

State: unvisited customers U, current location i, current load l (less
preferred).  The tour starts at customer 0 and must stop at customer
n-1.  Each commodity raises the load at its pickup customer and lowers
it at its delivery customer; the per-customer net change and the set of
customers that must precede each customer are precomputed.  A customer
is visitable when an edge from the current location exists, the load
stays within capacity, and all its pickups are done.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .. import bitset
from .. import expressions as ex
from ..model import (
    BaseCase,
    CostStructure,
    ELEMENT,
    INTEGER,
    LESS,
    Model,
    SET,
    StateMetadata,
    Transition,
    Variable,
)
from . import common as c


@dataclass(frozen=True)
class MpdtspInstance:
    travel: tuple[tuple[int, ...], ...]
    edges: frozenset[tuple[int, int]]  # directed (i, j) pairs
    capacity: int
    commodities: tuple[tuple[int, int, int], ...]  # (pickup, delivery, weight)

    @property
    def n(self) -> int:
        return len(self.travel)

    @cached_property
    def net_change(self) -> tuple[int, ...]:
        delta = [0] * self.n
        for pickup, delivery, weight in self.commodities:
            delta[pickup] += weight
            delta[delivery] -= weight
        return tuple(delta)

    @cached_property
    def predecessors(self) -> tuple[frozenset[int], ...]:
        pred = [set() for _ in range(self.n)]
        for pickup, delivery, _ in self.commodities:
            pred[delivery].add(pickup)
        return tuple(frozenset(p) for p in pred)

    @cached_property
    def cheapest_in(self) -> tuple[int, ...]:
        return tuple(
            min((self.travel[k][j] for k in range(self.n) if (k, j) in self.edges), default=0)
            for j in range(self.n)
        )

    @cached_property
    def cheapest_out(self) -> tuple[int, ...]:
        return tuple(
            min((self.travel[j][k] for k in range(self.n) if (j, k) in self.edges), default=0)
            for j in range(self.n)
        )


def parse_mpdtsp(text: str) -> MpdtspInstance:
    """Text form: ``n commodity-count capacity edge-count``, the travel
    matrix rows, one ``pickup delivery weight`` line per commodity, then
    one ``i j`` line per directed edge (``edge-count = -1`` means the
    complete graph)."""
    fields = iter(text.split())
    try:
        n = int(next(fields))
        m = int(next(fields))
        capacity = int(next(fields))
        edge_count = int(next(fields))
        travel = tuple(tuple(int(next(fields)) for _ in range(n)) for _ in range(n))
        commodities = tuple(
            (int(next(fields)), int(next(fields)), int(next(fields))) for _ in range(m)
        )
        if edge_count < 0:
            edges = frozenset((i, j) for i in range(n) for j in range(n) if i != j)
        else:
            edges = frozenset(
                (int(next(fields)), int(next(fields))) for _ in range(edge_count)
            )
    except StopIteration:
        raise ValueError("truncated instance text") from None
    return MpdtspInstance(travel, edges, capacity, commodities)


def remove_unusable_edges(instance: MpdtspInstance) -> MpdtspInstance:
    """Drop edges the tour structure can never use: self-loops, edges
    into the start customer, and edges out of the stop customer."""
    n = instance.n
    kept = frozenset(
        (i, j)
        for i, j in instance.edges
        if i != j and j != 0 and i != n - 1
    )
    return MpdtspInstance(instance.travel, kept, instance.capacity, instance.commodities)


def build_mpdtsp(instance: MpdtspInstance, preprocess: bool = False) -> Model:
    if preprocess:
        instance = remove_unusable_edges(instance)
    n = instance.n
    q = instance.capacity
    meta = StateMetadata(
        {"customer": n},
        [
            Variable("U", SET, "customer"),
            Variable("i", ELEMENT, "customer"),
            Variable("l", INTEGER, preference=LESS),
        ],
    )
    edge_matrix = tuple(
        tuple(1 if (i, j) in instance.edges else 0 for j in range(n)) for i in range(n)
    )
    tables = ex.TableRegistry(
        [
            c.matrix_table("c", instance.travel),
            c.matrix_table("edge", edge_matrix),
            c.vector_table("delta", instance.net_change),
            c.vector_table("cin", instance.cheapest_in),
            c.vector_table("cout", instance.cheapest_out),
        ]
    )
    U = meta.set_("U")
    i = meta.element("i")
    load = meta.numeric("l")

    transitions = []
    for j in range(1, n - 1):
        ej = c.econst(j)
        preconditions = [
            c.member(j, U),
            c.eq(c.ntab("edge", i, ej), 1),
            c.le(c.add(load, c.ntab("delta", ej)), q),
        ]
        if instance.predecessors[j]:
            preconditions.append(
                c.empty(
                    ex.SetIntersection(c.sconst(sorted(instance.predecessors[j]), n), U)
                )
            )
        transitions.append(
            Transition(
                name=f"visit-{j}",
                preconditions=tuple(preconditions),
                effects=(
                    (meta.index("U"), ex.SetRemove(ej, U)),
                    (meta.index("i"), ej),
                    (meta.index("l"), c.add(load, c.ntab("delta", ej))),
                ),
                weight=c.ntab("c", i, ej),
            )
        )

    stop = c.econst(n - 1)
    return Model(
        metadata=meta,
        tables=tables,
        target=(bitset.from_items(range(1, n - 1), n), 0, 0),
        transitions=transitions,
        base_cases=[
            BaseCase(
                (c.empty(U), c.eq(c.ntab("edge", i, stop), 1)),
                c.ntab("c", i, stop),
            )
        ],
        dual_bounds=[
            c.add(c.sum_over("cin", U), c.ntab("cin", stop)),
            c.add(c.sum_over("cout", U), c.ntab("cout", i)),
        ],
        costs=CostStructure(operator="+", direction="min", cost_type="integer"),
        acyclic=True,
    )
