"""Minimization of open stacks, solved in customer order.

State: customers whose stacks are not yet closed (R) and customers whose
stacks have been opened (O).  Finishing customer c produces all of c's
outstanding products at once, opening the stacks of every neighbor, so
the step's stack count is the open-and-unfinished stacks plus the newly
opened ones.  The objective folds steps with max, not addition.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .. import bitset
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
class MospInstance:
    customer_products: tuple[frozenset[int], ...]
    products: int

    @property
    def customers(self) -> int:
        return len(self.customer_products)

    @cached_property
    def neighbors(self) -> tuple[frozenset[int], ...]:
        """Customers sharing at least one product (including oneself)."""
        return tuple(
            frozenset(
                other
                for other, theirs in enumerate(self.customer_products)
                if mine & theirs
            )
            for mine in self.customer_products
        )


def parse_mosp(text: str) -> MospInstance:
    """Text form: ``customers products``, then one line per customer:
    the order size followed by its product indices."""
    fields = iter(text.split())
    try:
        customers = int(next(fields))
        products = int(next(fields))
        orders = []
        for _ in range(customers):
            size = int(next(fields))
            orders.append(frozenset(int(next(fields)) for _ in range(size)))
    except StopIteration:
        raise ValueError("truncated instance text") from None
    return MospInstance(tuple(orders), products)


def build_mosp(instance: MospInstance) -> Model:
    n = instance.customers
    meta = StateMetadata(
        {"customer": max(n, 1)},
        [
            Variable("R", SET, "customer"),
            Variable("O", SET, "customer"),
        ],
    )
    tables = ex.TableRegistry()
    remaining = meta.set_("R")
    opened = meta.set_("O")

    transitions = []
    for customer in range(n):
        e = c.econst(customer)
        near = c.sconst(sorted(instance.neighbors[customer]), max(n, 1))
        stacks = c.card(
            ex.SetUnion(
                ex.SetIntersection(opened, remaining),
                ex.SetDifference(near, opened),
            )
        )
        transitions.append(
            Transition(
                name=f"finish-{customer}",
                preconditions=(c.member(customer, remaining),),
                effects=(
                    (meta.index("R"), ex.SetRemove(e, remaining)),
                    (meta.index("O"), ex.SetUnion(opened, near)),
                ),
                weight=stacks,
            )
        )

    return Model(
        metadata=meta,
        tables=tables,
        target=(bitset.from_items(range(n), max(n, 1)), 0),
        transitions=transitions,
        base_cases=[BaseCase((c.empty(remaining),), c.nconst(0))],
        dual_bounds=[c.nconst(0)],
        costs=CostStructure(
            operator="max", direction="min", cost_type="integer", max_identity=0
        ),
        acyclic=True,
    )
