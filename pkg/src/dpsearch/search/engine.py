"""Generic anytime best-first branch-and-bound over a model.

One engine drives every non-beam solver; the open-list policy is the
only difference between them.  The engine pops a frontier node, treats
base states as candidate solutions (updating the primal bound and
pruning the open list), and otherwise expands the node: successors are
filtered by state constraints, checked against the dominance registry,
cut off when their f-value cannot beat the primal bound, and inserted.

On natural exhaustion the returned status is proved: OPTIMAL when a
solution was found, INFEASIBLE otherwise (meaning "no solution better
than the initial primal bound" when one was supplied).  A time limit
yields the best solution found so far plus the best dual bound seen.

Each invocation is single-threaded and self-contained; the model is
only read, so concurrent invocations may share it.  Progress callbacks
run on the invoking thread.
"""

from __future__ import annotations

import time
from typing import Callable, Optional

from ..model import Model, combine
from .nodes import BoundTracker, SearchNode, StateRegistry, make_node
from .open_lists import (
    BestFirstList,
    CyclicLayerList,
    DepthStackList,
    DiscrepancyList,
    LayerBudgetList,
    PackList,
)
from .solution import DualCallback, PrimalCallback, Solution, SolverParams, Status


class _Run:
    """Shared bookkeeping for one solver invocation: primal/dual incumbents,
    event logs, and the wall clock."""

    def __init__(
        self,
        model: Model,
        params: SolverParams,
        on_primal: Optional[PrimalCallback],
        on_dual: Optional[DualCallback],
        start_time: Optional[float] = None,
    ):
        self.model = model
        self.params = params
        self.on_primal = on_primal
        self.on_dual = on_dual
        self.start = time.monotonic() if start_time is None else start_time
        self.costs = model.costs
        self.has_bound = bool(model.dual_bounds)
        self.primal = params.initial_bound
        self.incumbent: Optional[list[str]] = None
        self.best_dual = None
        self.primal_events: list[tuple[float, float]] = []
        self.dual_events: list[tuple[float, float]] = []
        self.first_solution_cost = None
        self.expanded = 0
        self.generated = 0

    def elapsed(self) -> float:
        return time.monotonic() - self.start

    def out_of_time(self) -> bool:
        limit = self.params.time_limit
        return limit is not None and self.elapsed() >= limit

    @property
    def cutoff(self):
        """Current primal bound as a pruning threshold."""
        return self.costs.worst if self.primal is None else self.primal

    def record_solution(self, cost, transitions: list[str]) -> None:
        self.primal = cost
        self.incumbent = transitions
        if self.first_solution_cost is None:
            self.first_solution_cost = cost
        stamp = self.elapsed()
        self.primal_events.append((stamp, cost))
        if self.on_primal is not None:
            self.on_primal(stamp, cost, transitions)

    def record_dual(self, bound) -> None:
        """Keep the reported dual bound monotone: only improvements count."""
        if bound is None:
            return
        if self.best_dual is None or self.costs.better(self.best_dual, bound):
            self.best_dual = bound
            stamp = self.elapsed()
            self.dual_events.append((stamp, bound))
            if self.on_dual is not None:
                self.on_dual(stamp, bound)

    def close_gap(self) -> None:
        """On a proved optimum the dual bound meets the primal bound."""
        if self.primal is not None:
            self.record_dual(self.primal)

    def finish(self, natural: bool) -> Solution:
        if natural:
            if self.incumbent is not None:
                self.close_gap()
                status = Status.OPTIMAL
            else:
                status = Status.INFEASIBLE
        else:
            status = Status.FEASIBLE if self.incumbent is not None else Status.NOT_FOUND
        return Solution(
            status=status,
            transitions=self.incumbent,
            cost=self.primal if self.incumbent is not None else None,
            bound=self.best_dual if status != Status.INFEASIBLE else None,
            expanded=self.expanded,
            generated=self.generated,
            elapsed=self.elapsed(),
            primal_events=self.primal_events,
            dual_events=self.dual_events,
            first_solution_cost=self.first_solution_cost,
        )


def generic_search(
    model: Model,
    policy_factory: Callable,
    params: Optional[SolverParams] = None,
    on_primal: Optional[PrimalCallback] = None,
    on_dual: Optional[DualCallback] = None,
) -> Solution:
    """Run the engine with the open list built by ``policy_factory``,
    which receives the liveness predicate shared with the engine."""
    params = params or SolverParams()
    run = _Run(model, params, on_primal, on_dual)
    costs = model.costs

    if not model.check_constraints(model.target):
        return run.finish(natural=True)

    def is_live(node: SearchNode) -> bool:
        if node.dead:
            return False
        if run.has_bound and not costs.better(node.f, run.cutoff):
            node.dead = True
            return False
        return True

    policy = policy_factory(is_live)
    registry = StateRegistry(model.metadata, costs)
    tracker = BoundTracker(costs) if run.has_bound else None
    counter = 0

    h0 = model.eval_dual_bound(model.target)
    root = make_node(
        costs,
        model.target,
        g=costs.identity,
        h=h0 if h0 is not None else costs.identity,
        f=combine(costs, costs.identity, h0) if h0 is not None else costs.identity,
        depth=0,
        counter=counter,
    )
    registry.insert(root)
    policy.push(root)
    policy.end_expansion()
    if tracker is not None:
        tracker.push(root)
    run.generated += 1

    natural = False
    while True:
        if tracker is not None:
            run.record_dual(tracker.probe(run.cutoff))
        if run.out_of_time():
            break
        node = policy.pop()
        if node is None:
            natural = True
            break
        run.expanded += 1
        state = node.state

        base = model.base_cost(state)
        if base is not None:
            cost = combine(costs, node.g, base)
            if costs.better(cost, run.cutoff):
                run.record_solution(cost, node.path())
                policy.notify_new_best()
            continue

        for transition in model.applicable_transitions(state):
            successor = model.successor(transition, state)
            if not model.check_constraints(successor):
                continue
            g = combine(costs, node.g, model.weight(transition, state))
            if registry.blocked(successor, g):
                continue
            if run.has_bound:
                h = model.eval_dual_bound(successor)
                f = combine(costs, g, h)
                if not costs.better(f, run.cutoff):
                    continue
            else:
                h = costs.identity
                f = g
            counter += 1
            child = make_node(
                costs, successor, g, h, f, node.depth + 1, counter, node, transition.name
            )
            registry.insert(child)
            policy.push(child)
            if tracker is not None:
                tracker.push(child)
            run.generated += 1
        policy.end_expansion()

    return run.finish(natural)


# ---------------------------------------------------------------------------
# The policy-specific entry points


def caasdy(model, params=None, on_primal=None, on_dual=None) -> Solution:
    """Best-first search on f-values; on cost-algebraic minimization with
    zero base costs the first solution popped is already optimal."""
    return generic_search(model, BestFirstList, params, on_primal, on_dual)


def dfbnb(model, params=None, on_primal=None, on_dual=None) -> Solution:
    """Depth-first branch and bound."""
    return generic_search(model, DepthStackList, params, on_primal, on_dual)


def cbfs(model, params=None, on_primal=None, on_dual=None) -> Solution:
    """Cyclic best-first search over depth layers."""
    return generic_search(model, CyclicLayerList, params, on_primal, on_dual)


def acps(model, params=None, on_primal=None, on_dual=None) -> Solution:
    """Layer-cycling search with a progressively growing per-layer budget."""
    params = params or SolverParams()
    factory = lambda is_live: LayerBudgetList(
        is_live, budget=params.acps_initial_budget, step=params.acps_budget_step
    )
    return generic_search(model, factory, params, on_primal, on_dual)


def apps(model, params=None, on_primal=None, on_dual=None) -> Solution:
    """Pack search with a progressively growing pack size."""
    params = params or SolverParams()
    factory = lambda is_live: PackList(
        is_live,
        budget=params.apps_initial_budget,
        step=params.apps_budget_step,
        max_budget=params.apps_max_budget,
    )
    return generic_search(model, factory, params, on_primal, on_dual)


def dbdfs(model, params=None, on_primal=None, on_dual=None) -> Solution:
    """Discrepancy-bounded depth-first search."""
    params = params or SolverParams()
    factory = lambda is_live: DiscrepancyList(is_live, k=params.dbdfs_k)
    return generic_search(model, factory, params, on_primal, on_dual)


def solve(
    model, solver: str, params=None, on_primal=None, on_dual=None
) -> Solution:
    """Dispatch by solver name (the names accepted in solver configs)."""
    from .beam import cabs

    solvers = {
        "caasdy": caasdy,
        "dfbnb": dfbnb,
        "cbfs": cbfs,
        "acps": acps,
        "apps": apps,
        "dbdfs": dbdfs,
        "cabs": cabs,
    }
    try:
        chosen = solvers[solver]
    except KeyError:
        raise ValueError(f"unknown solver {solver!r}") from None
    return chosen(model, params, on_primal=on_primal, on_dual=on_dual)
