"""Single-machine total weighted tardiness (minimize).

State: the set F of already scheduled jobs.  Scheduling job i after F
costs its weight times its tardiness at completion; optional precedence
sets restrict which jobs may come before others.  The declared bound is
the trivial zero function, which still enables primal-bound pruning.
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
class WtInstance:
    processing: tuple[int, ...]
    due: tuple[int, ...]
    weights: tuple[int, ...]
    predecessors: tuple[frozenset[int], ...] = ()

    def __post_init__(self):
        n = len(self.processing)
        if len(self.due) != n or len(self.weights) != n:
            raise ValueError("processing, due, and weight lists must align")
        if not self.predecessors:
            object.__setattr__(self, "predecessors", tuple(frozenset() for _ in range(n)))
        elif len(self.predecessors) != n:
            raise ValueError("predecessor sets must cover every job")

    @property
    def n(self) -> int:
        return len(self.processing)


def parse_wt(text: str) -> WtInstance:
    """Text form: the job count, one ``processing due weight`` line per
    job, then any number of optional ``before after`` precedence pairs."""
    fields = text.split()
    try:
        n = int(fields[0])
        rows = [tuple(int(v) for v in fields[1 + 3 * i : 4 + 3 * i]) for i in range(n)]
        if any(len(r) != 3 for r in rows):
            raise IndexError
    except (IndexError, ValueError):
        raise ValueError("truncated instance text") from None
    rest = fields[1 + 3 * n :]
    if len(rest) % 2:
        raise ValueError("precedence lines must hold pairs")
    pred = [set() for _ in range(n)]
    for pos in range(0, len(rest), 2):
        before, after = int(rest[pos]), int(rest[pos + 1])
        pred[after].add(before)
    return WtInstance(
        processing=tuple(r[0] for r in rows),
        due=tuple(r[1] for r in rows),
        weights=tuple(r[2] for r in rows),
        predecessors=tuple(frozenset(p) for p in pred),
    )


def build_wt(instance: WtInstance) -> Model:
    n = instance.n
    meta = StateMetadata(
        {"job": max(n, 1)},
        [Variable("F", SET, "job")],
    )
    tables = ex.TableRegistry(
        [
            c.vector_table("p", instance.processing),
            c.vector_table("d", instance.due),
            c.vector_table("w", instance.weights),
        ]
    )
    done = meta.set_("F")

    transitions = []
    for job in range(n):
        e = c.econst(job)
        preconditions = [c.not_(c.member(job, done))]
        if instance.predecessors[job]:
            preconditions.append(
                c.subset(c.sconst(sorted(instance.predecessors[job]), n), done)
            )
        completion = c.add(c.sum_over("p", done), c.ntab("p", e))
        tardiness = c.nmax(0, c.sub(completion, c.ntab("d", e)))
        transitions.append(
            Transition(
                name=f"schedule-{job}",
                preconditions=tuple(preconditions),
                effects=((meta.index("F"), ex.SetAdd(e, done)),),
                weight=c.mul(c.ntab("w", e), tardiness),
            )
        )

    everyone = c.sconst(range(n), max(n, 1))
    return Model(
        metadata=meta,
        tables=tables,
        target=(0,),
        transitions=transitions,
        base_cases=[BaseCase((c.subset(everyone, done),), c.nconst(0))],
        dual_bounds=[c.nconst(0)],
        costs=CostStructure(operator="+", direction="min", cost_type="integer"),
        acyclic=True,
    )
