"""Seeded generators for tiny random instances of every problem class.

Sizes stay small enough that the exhaustive oracle and all solvers
finish quickly, while time windows, capacities, and precedence are drawn
loosely enough to mix feasible and infeasible instances.
"""

from __future__ import annotations

from random import Random

from .binpacking import BinPackingInstance
from .cvrp import CvrpInstance
from .graphclear import GraphClearInstance
from .mdkp import MdkpInstance
from .mosp import MospInstance
from .mpdtsp import MpdtspInstance
from .optw import OptwInstance
from .salbp1 import Salbp1Instance
from .talent import TalentInstance
from .tardiness import WtInstance
from .tsptw import TsptwInstance


def _travel_matrix(rng: Random, n: int, low: int = 1, high: int = 9):
    return tuple(
        tuple(0 if i == j else rng.randint(low, high) for j in range(n))
        for i in range(n)
    )


def random_tsptw(rng: Random) -> TsptwInstance:
    n = rng.randint(2, 7)
    travel = _travel_matrix(rng, n)
    horizon = rng.randint(3, 6 * n)
    ready = [0] * n
    deadline = [horizon * 2] * n
    for j in range(1, n):
        ready[j] = rng.randint(0, horizon // 2)
        deadline[j] = ready[j] + rng.randint(0, horizon)
    return TsptwInstance(travel, tuple(ready), tuple(deadline))


def random_cvrp(rng: Random) -> CvrpInstance:
    n = rng.randint(2, 6)
    demands = tuple([0] + [rng.randint(1, 4) for _ in range(n - 1)])
    capacity = rng.randint(max(demands), max(sum(demands), 1) + 2)
    vehicles = rng.randint(1, 3)
    return CvrpInstance(_travel_matrix(rng, n), demands, capacity, vehicles)


def random_mpdtsp(rng: Random) -> MpdtspInstance:
    n = rng.randint(3, 7)
    edges = set()
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < 0.85:
                edges.add((i, j))
    commodities = []
    for _ in range(rng.randint(0, 3)):
        pickup = rng.randint(0, n - 2)
        delivery = rng.randint(pickup + 1, n - 1)
        commodities.append((pickup, delivery, rng.randint(1, 3)))
    capacity = rng.randint(0, 6)
    return MpdtspInstance(
        _travel_matrix(rng, n), frozenset(edges), capacity, tuple(commodities)
    )


def random_optw(rng: Random) -> OptwInstance:
    n = rng.randint(2, 6)
    travel = _travel_matrix(rng, n)
    horizon = rng.randint(2, 5 * n)
    profits = [0] + [rng.randint(0, 9) for _ in range(n - 1)]
    ready = [0] * n
    deadline = [horizon] * n
    for j in range(1, n):
        ready[j] = rng.randint(0, horizon // 2)
        deadline[j] = ready[j] + rng.randint(0, horizon)
    return OptwInstance(travel, tuple(profits), tuple(ready), tuple(deadline))


def random_mdkp(rng: Random) -> MdkpInstance:
    n = rng.randint(3, 10)
    m = rng.randint(1, 3)
    profits = tuple(rng.randint(0, 9) for _ in range(n))
    weights = tuple(
        tuple(rng.choice([0, rng.randint(1, 9)]) for _ in range(m)) for _ in range(n)
    )
    capacities = tuple(rng.randint(0, 12) for _ in range(m))
    return MdkpInstance(profits, weights, capacities)


def random_binpacking(rng: Random) -> BinPackingInstance:
    n = rng.randint(2, 7)
    capacity = rng.randint(4, 12)
    weights = tuple(rng.randint(1, capacity) for _ in range(n))
    return BinPackingInstance(weights, capacity)


def random_salbp1(rng: Random) -> Salbp1Instance:
    n = rng.randint(2, 7)
    capacity = rng.randint(4, 12)
    weights = tuple(rng.randint(1, capacity) for _ in range(n))
    predecessors = [set() for _ in range(n)]
    for before in range(n):
        for after in range(before + 1, n):
            if rng.random() < 0.3:
                predecessors[after].add(before)
    return Salbp1Instance(weights, capacity, tuple(frozenset(p) for p in predecessors))


def random_wt(rng: Random) -> WtInstance:
    n = rng.randint(2, 7)
    processing = tuple(rng.randint(1, 9) for _ in range(n))
    due = tuple(rng.randint(0, sum(processing)) for _ in range(n))
    weights = tuple(rng.randint(0, 9) for _ in range(n))
    predecessors = [set() for _ in range(n)]
    for before in range(n):
        for after in range(before + 1, n):
            if rng.random() < 0.2:
                predecessors[after].add(before)
    return WtInstance(processing, due, weights, tuple(frozenset(p) for p in predecessors))


def random_talent(rng: Random) -> TalentInstance:
    scenes = rng.randint(2, 6)
    actors = rng.randint(1, 5)
    casts = tuple(
        frozenset(a for a in range(actors) if rng.random() < 0.6) for _ in range(scenes)
    )
    durations = tuple(rng.randint(1, 5) for _ in range(scenes))
    costs = tuple(rng.randint(1, 5) for _ in range(actors))
    return TalentInstance(casts, durations, costs)


def random_mosp(rng: Random) -> MospInstance:
    customers = rng.randint(2, 6)
    products = rng.randint(2, 6)
    orders = tuple(
        frozenset(p for p in range(products) if rng.random() < 0.5)
        for _ in range(customers)
    )
    return MospInstance(orders, products)


def random_graphclear(rng: Random) -> GraphClearInstance:
    n = rng.randint(2, 6)
    nodes = tuple(rng.randint(1, 5) for _ in range(n))
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                edges[(i, j)] = rng.randint(1, 4)
    return GraphClearInstance(nodes, edges)
