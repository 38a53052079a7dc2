"""Open-list policies: how the next frontier node is chosen.

Every policy supports ``push`` (per generated successor),
``end_expansion`` (called once after all successors of one expansion
were pushed, so sibling-aware policies can order them), ``pop`` (next
node honoring the selection rule, skipping stale entries), and
``notify_new_best`` (hook fired on primal improvements).

Stale entries are handled lazily: nodes evicted by dominance or cut off
by the primal bound stay in the internal containers until they surface,
at which point the shared liveness predicate discards them.
"""

from __future__ import annotations

import heapq
import math
from typing import Callable, Optional

from .nodes import SearchNode

IsLive = Callable[[SearchNode], bool]


class _Heap:
    """Binary heap over the deterministic node order with lazy deletion."""

    def __init__(self, is_live: IsLive):
        self._entries: list[tuple] = []
        self._is_live = is_live

    def __len__(self):
        return len(self._entries)

    def push(self, node: SearchNode) -> None:
        heapq.heappush(self._entries, (node.order, node))

    def pop(self) -> Optional[SearchNode]:
        while self._entries:
            _, node = heapq.heappop(self._entries)
            if self._is_live(node):
                return node
        return None

    def has_live(self) -> bool:
        while self._entries:
            if self._is_live(self._entries[0][1]):
                return True
            heapq.heappop(self._entries)
        return False


class BestFirstList:
    """Plain best-first selection: the node with the best f-value."""

    def __init__(self, is_live: IsLive):
        self._heap = _Heap(is_live)

    def push(self, node):
        self._heap.push(node)

    def end_expansion(self):
        pass

    def pop(self):
        return self._heap.pop()

    def notify_new_best(self):
        pass


class DepthStackList:
    """Depth-first selection; siblings are expanded in f-order.

    The open list is a stack.  Each expansion's successors are pushed
    worst-first so the best sibling sits on top.
    """

    def __init__(self, is_live: IsLive):
        self._is_live = is_live
        self._stack: list[SearchNode] = []
        self._pending: list[SearchNode] = []

    def push(self, node):
        self._pending.append(node)

    def end_expansion(self):
        self._pending.sort(key=lambda n: n.order, reverse=True)
        self._stack.extend(self._pending)
        self._pending.clear()

    def pop(self):
        while self._stack:
            node = self._stack.pop()
            if self._is_live(node):
                return node
        return None

    def notify_new_best(self):
        pass


class _LayeredList:
    """Shared machinery for depth-layered policies (one heap per depth)."""

    def __init__(self, is_live: IsLive):
        self._is_live = is_live
        self._layers: list[_Heap] = []

    def push(self, node):
        while len(self._layers) <= node.depth:
            self._layers.append(_Heap(self._is_live))
        self._layers[node.depth].push(node)

    def end_expansion(self):
        pass

    def _any_live(self, start: int = 0) -> bool:
        return any(layer.has_live() for layer in self._layers[start:])


class CyclicLayerList(_LayeredList):
    """Cycle through depth layers, taking the best node of each in turn.

    The cursor resets to depth 0 when a new best solution is found or
    when every layer at or beyond it is exhausted.
    """

    def __init__(self, is_live: IsLive):
        super().__init__(is_live)
        self._cursor = 0

    def pop(self):
        for _ in range(2):
            for depth in range(self._cursor, len(self._layers)):
                node = self._layers[depth].pop()
                if node is not None:
                    self._cursor = depth + 1
                    return node
            if self._cursor == 0:
                return None
            self._cursor = 0
        return None

    def notify_new_best(self):
        self._cursor = 0


class LayerBudgetList(_LayeredList):
    """Layer-cycling with a per-layer expansion budget that grows by one
    whenever the cursor wraps around or a new best solution is found."""

    def __init__(self, is_live: IsLive, budget: int = 1, step: int = 1):
        super().__init__(is_live)
        self._cursor = 0
        self._taken = 0
        self._budget = budget
        self._step = step

    def _reset(self):
        self._cursor = 0
        self._taken = 0
        self._budget += self._step

    def pop(self):
        wrapped = False
        while True:
            if self._cursor >= len(self._layers):
                if wrapped or not self._any_live():
                    return None
                wrapped = True
                self._reset()
                continue
            node = self._layers[self._cursor].pop()
            if node is None:
                self._cursor += 1
                self._taken = 0
                continue
            self._taken += 1
            if self._taken >= self._budget:
                self._cursor += 1
                self._taken = 0
            return node

    def notify_new_best(self):
        self._cursor = 0
        self._taken = 0
        self._budget += self._step


class PackList:
    """Expand a pack of best states; their best successors form the next
    pack and the rest are suspended.  When both run dry, the best states
    are recalled from the suspend list and the pack size grows."""

    def __init__(
        self,
        is_live: IsLive,
        budget: int = 1,
        step: int = 1,
        max_budget: float = math.inf,
    ):
        self._is_live = is_live
        self._pack: list[SearchNode] = []  # reversed order: best last
        self._staging: list[SearchNode] = []
        self._suspend = _Heap(is_live)
        self._budget = budget
        self._step = step
        self._max_budget = max_budget

    def push(self, node):
        self._staging.append(node)

    def end_expansion(self):
        pass

    def _refill_pack(self, nodes: list[SearchNode]) -> None:
        nodes.sort(key=lambda n: n.order)
        for leftover in nodes[self._budget :]:
            self._suspend.push(leftover)
        self._pack = nodes[: self._budget][::-1]

    def pop(self):
        while True:
            while self._pack:
                node = self._pack.pop()
                if self._is_live(node):
                    return node
            if self._staging:
                nodes = [n for n in self._staging if self._is_live(n)]
                self._staging.clear()
                if nodes:
                    self._refill_pack(nodes)
                continue
            recalled = []
            while len(recalled) < self._budget:
                node = self._suspend.pop()
                if node is None:
                    break
                recalled.append(node)
            if not recalled:
                return None
            recalled.reverse()
            self._pack = recalled
            if self._budget < self._max_budget:
                self._budget += self._step

    def notify_new_best(self):
        pass


class DiscrepancyList:
    """Depth-first search bounded by path discrepancy.

    The best successor of each expansion inherits its parent's
    discrepancy; the others get one more.  Nodes within the current
    discrepancy window live on the active stack; the rest wait on the
    deferred list, which becomes the active stack when the window moves.
    """

    def __init__(self, is_live: IsLive, k: int = 1):
        self._is_live = is_live
        self._k = k
        self._window = 1  # nodes with discrepancy <= window * k - 1 are active
        self._active: list[SearchNode] = []
        self._deferred: list[SearchNode] = []
        self._pending: list[SearchNode] = []

    def push(self, node):
        self._pending.append(node)

    def end_expansion(self):
        self._pending.sort(key=lambda n: n.order)
        for rank, node in enumerate(self._pending):
            parent_d = node.parent.discrepancy if node.parent is not None else 0
            node.discrepancy = parent_d if rank == 0 else parent_d + 1
        for node in reversed(self._pending):
            if node.discrepancy <= self._window * self._k - 1:
                self._active.append(node)
            else:
                self._deferred.append(node)
        self._pending.clear()

    def pop(self):
        while True:
            while self._active:
                node = self._active.pop()
                if self._is_live(node):
                    return node
            live = [n for n in self._deferred if self._is_live(n)]
            self._deferred.clear()
            if not live:
                return None
            self._active = live
            self._window += 1

    def notify_new_best(self):
        pass
