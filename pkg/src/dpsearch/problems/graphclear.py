"""Graph-clear: sweep every node with the fewest robots at any step.

State: the set C of already swept nodes.  Sweeping node v costs its own
weight, plus blocking every edge at v, plus blocking every edge between
swept nodes and the other unswept nodes; the objective folds steps with
max.  The blocking sum over edges at v deliberately counts swept
neighbors too, reading the step-cost formula literally.  Edge weights
default to zero, so only actual edges need table entries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import expressions as ex
from ..model import (
    BaseCase,
    CostStructure,
    Model,
    SET,
    StateMetadata,
    Transition,
    Variable,
)
from . import common as c


@dataclass(frozen=True)
class GraphClearInstance:
    node_weights: tuple[int, ...]
    edge_weights: dict[tuple[int, int], int]  # undirected; missing pairs weigh 0

    def __post_init__(self):
        normalized = {}
        for (i, j), w in self.edge_weights.items():
            if i == j:
                raise ValueError("self-loops are not allowed")
            normalized[(min(i, j), max(i, j))] = w
        object.__setattr__(self, "edge_weights", normalized)

    @property
    def n(self) -> int:
        return len(self.node_weights)

    def weight(self, i: int, j: int) -> int:
        if i == j:
            return 0
        return self.edge_weights.get((min(i, j), max(i, j)), 0)


def parse_graphclear(text: str) -> GraphClearInstance:
    """Text form: the node count, the node weight line, the edge count,
    then one ``i j weight`` line per edge."""
    fields = iter(text.split())
    try:
        n = int(next(fields))
        nodes = tuple(int(next(fields)) for _ in range(n))
        edges = int(next(fields))
        weights = {}
        for _ in range(edges):
            i, j, w = int(next(fields)), int(next(fields)), int(next(fields))
            weights[(i, j)] = w
    except StopIteration:
        raise ValueError("truncated instance text") from None
    return GraphClearInstance(nodes, weights)


def build_graphclear(instance: GraphClearInstance) -> Model:
    n = instance.n
    meta = StateMetadata(
        {"node": max(n, 1)},
        [Variable("C", SET, "node")],
    )
    edge_values = {}
    for (i, j), w in instance.edge_weights.items():
        edge_values[(i, j)] = w
        edge_values[(j, i)] = w
    tables = ex.TableRegistry(
        [
            c.vector_table("a", instance.node_weights),
            ex.Table("b", "integer", (max(n, 1), max(n, 1)), edge_values, default=0),
        ]
    )
    swept = meta.set_("C")

    transitions = []
    for node in range(n):
        e = c.econst(node)
        blocking = instance.node_weights[node] + sum(
            instance.weight(node, other) for other in range(n)
        )
        # edges from swept nodes into the still-contaminated rest
        others = ex.SetRemove(e, ex.SetComplement(swept))
        crossing = [
            c.ite(c.member(i, swept), c.sum_over("b", others, c.econst(i)), 0)
            for i in range(n)
            if i != node
        ]
        transitions.append(
            Transition(
                name=f"sweep-{node}",
                preconditions=(c.not_(c.member(node, swept)),),
                effects=((meta.index("C"), ex.SetAdd(e, swept)),),
                weight=c.add(blocking, *crossing) if crossing else c.nconst(blocking),
            )
        )

    everything = c.sconst(range(n), max(n, 1))
    return Model(
        metadata=meta,
        tables=tables,
        target=(0,),
        transitions=transitions,
        base_cases=[BaseCase((c.subset(everything, swept),), c.nconst(0))],
        dual_bounds=[c.nconst(0)],
        costs=CostStructure(
            operator="max", direction="min", cost_type="integer", max_identity=0
        ),
        acyclic=True,
    )
