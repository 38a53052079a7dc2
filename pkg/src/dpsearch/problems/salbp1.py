"""Simple assembly line balancing, type 1 (minimize stations).

Bin packing with precedence: a task may only be scheduled once all its
predecessors are done, and a new station opens (forced) only when no
task can be scheduled in the current one, the maximum-load rule.  The
three bin-packing lower bounds carry over unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import bitset
from .. import expressions as ex
from ..model import (
    BaseCase,
    CostStructure,
    GREATER,
    INTEGER,
    Model,
    SET,
    StateMetadata,
    Transition,
    Variable,
)
from . import binpacking as bp
from . import common as c


@dataclass(frozen=True)
class Salbp1Instance:
    weights: tuple[int, ...]  # task times
    capacity: int  # cycle time
    predecessors: tuple[frozenset[int], ...]

    def __post_init__(self):
        if any(w > self.capacity for w in self.weights):
            raise ValueError("a task time exceeds the cycle time")
        n = len(self.weights)
        if len(self.predecessors) != n:
            raise ValueError("predecessor sets must cover every task")
        # reject cyclic precedence via topological elimination
        remaining = set(range(n))
        while remaining:
            free = [i for i in remaining if not (self.predecessors[i] & remaining)]
            if not free:
                raise ValueError("cyclic precedence constraints")
            remaining.difference_update(free)

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def large_half(self):
        return bp.BinPackingInstance(self.weights, self.capacity).large_half

    @property
    def exact_half_x2(self):
        return bp.BinPackingInstance(self.weights, self.capacity).exact_half_x2

    @property
    def third_class_x6(self):
        return bp.BinPackingInstance(self.weights, self.capacity).third_class_x6


def parse_salbp1(text: str) -> Salbp1Instance:
    """Text form: the cycle time, the task count, the task times, then
    any number of ``before after`` precedence lines."""
    fields = text.split()
    try:
        capacity = int(fields[0])
        n = int(fields[1])
        weights = tuple(int(v) for v in fields[2 : 2 + n])
        if len(weights) != n:
            raise IndexError
    except (IndexError, ValueError):
        raise ValueError("truncated instance text") from None
    rest = fields[2 + n :]
    if len(rest) % 2:
        raise ValueError("precedence lines must hold pairs")
    pred = [set() for _ in range(n)]
    for pos in range(0, len(rest), 2):
        before, after = int(rest[pos]), int(rest[pos + 1])
        pred[after].add(before)
    return Salbp1Instance(weights, capacity, tuple(frozenset(p) for p in pred))


def build_salbp1(instance: Salbp1Instance) -> Model:
    n = instance.n
    q = instance.capacity
    meta = StateMetadata(
        {"task": max(n, 1)},
        [
            Variable("U", SET, "task"),
            Variable("r", INTEGER, preference=GREATER),
        ],
    )
    tables = ex.TableRegistry(bp.bound_tables(instance))
    U = meta.set_("U")
    room = meta.numeric("r")

    def schedulable(task: int) -> ex.Condition:
        parts = [c.member(task, U), c.ge(room, c.ntab("w", c.econst(task)))]
        if instance.predecessors[task]:
            parts.append(
                c.empty(
                    ex.SetIntersection(
                        c.sconst(sorted(instance.predecessors[task]), max(n, 1)), U
                    )
                )
            )
        return c.and_(*parts)

    none_schedulable = (
        c.and_(*[c.not_(schedulable(task)) for task in range(n)])
        if n
        else ex.BoolConst(True)
    )

    transitions = [
        Transition(
            name="open-station",
            preconditions=(c.not_(c.empty(U)), none_schedulable),
            effects=((meta.index("r"), c.nconst(q)),),
            weight=c.nconst(1),
            forced=True,
        )
    ]
    for task in range(n):
        e = c.econst(task)
        transitions.append(
            Transition(
                name=f"schedule-{task}",
                preconditions=(schedulable(task),),
                effects=(
                    (meta.index("U"), ex.SetRemove(e, U)),
                    (meta.index("r"), c.sub(room, c.ntab("w", e))),
                ),
                weight=c.nconst(0),
            )
        )

    return Model(
        metadata=meta,
        tables=tables,
        target=(bitset.from_items(range(n), max(n, 1)), 0),
        transitions=transitions,
        base_cases=[BaseCase((c.empty(U),), c.nconst(0))],
        dual_bounds=bp.bound_expressions(meta, U, room, q),
        costs=CostStructure(operator="+", direction="min", cost_type="integer"),
        acyclic=True,
    )
