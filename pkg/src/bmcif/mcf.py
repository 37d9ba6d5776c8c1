"""Single-objective min-cost-flow machinery on integer networks.

Every routine accepts optional ``lower``/``upper`` override vectors so that
callers can tighten arc bounds (partition nodes, pinned arcs) without
building a new :class:`~bmcif.model.Instance`.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .model import ArityError, BiCost, Flow, InfeasibleError, Instance, node_excess

ScalarCost = Sequence[int]


class NotOptimalError(ValueError):
    """The flow admits a negative-cost residual cycle."""


class ResidualArc(NamedTuple):
    tail: int  # 0-based
    head: int
    arc: int
    direction: int  # +1 forward copy, -1 backward copy
    capacity: int
    cost: int | None


@dataclass(frozen=True)
class ResidualGraph:
    node_count: int
    arcs: tuple[ResidualArc, ...]

    def forward(self) -> list[ResidualArc]:
        return [r for r in self.arcs if r.direction > 0]

    def backward(self) -> list[ResidualArc]:
        return [r for r in self.arcs if r.direction < 0]

    def find(self, arc: int, direction: int) -> ResidualArc | None:
        for r in self.arcs:
            if r.arc == arc and r.direction == direction:
                return r
        return None


@dataclass(frozen=True)
class Cycle:
    """A residual cycle given as ``(arc, direction)`` steps in traversal order."""

    steps: tuple[tuple[int, int], ...]
    cost: BiCost
    max_step: int

    @property
    def chi(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for a, d in self.steps:
            out[a] = out.get(a, 0) + d
        return out

    @property
    def forward_arcs(self) -> set[int]:
        return {a for a, d in self.steps if d > 0}

    @property
    def backward_arcs(self) -> set[int]:
        return {a for a, d in self.steps if d < 0}

    def is_proper(self) -> bool:
        arcs = [a for a, _ in self.steps]
        return len(arcs) == len(set(arcs))

    def incidence(self, m: int) -> list[int]:
        vec = [0] * m
        for a, d in self.steps:
            vec[a] += d
        return vec


def make_cycle(
    inst: Instance,
    steps: Sequence[tuple[int, int]],
    flow: Sequence[int],
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
) -> Cycle:
    lo = inst.lowers if lower is None else lower
    hi = inst.uppers if upper is None else upper
    c1 = c2 = 0
    room = None
    for a, d in steps:
        c1 += d * inst.cost1[a]
        c2 += d * inst.cost2[a]
        r = hi[a] - flow[a] if d > 0 else flow[a] - lo[a]
        room = r if room is None else min(room, r)
    return Cycle(tuple(steps), BiCost(c1, c2), 0 if room is None else room)


@dataclass(frozen=True)
class TreeFlow:
    """A feasible flow with a spanning-tree structure ``(T, L, U)``.

    On a network whose underlying graph is disconnected the tree is a spanning
    forest (one tree per component).
    """

    inst: Instance
    flow: Flow
    tree_arcs: frozenset[int]
    lower_set: frozenset[int]
    upper_set: frozenset[int]
    potentials: tuple[int, ...]
    lower: tuple[int, ...]
    upper: tuple[int, ...]
    _parent: tuple[tuple[int, int], ...] = field(repr=False, compare=False)
    _depth: tuple[int, ...] = field(repr=False, compare=False)
    _cycles: dict = field(default_factory=dict, repr=False, compare=False)

    def non_tree_arcs(self) -> list[int]:
        return sorted(self.lower_set | self.upper_set)

    def tree_path(self, u: int, v: int) -> list[tuple[int, int]]:
        """Steps ``(arc, direction)`` of the tree path from node ``u`` to ``v`` (0-based)."""
        up: list[tuple[int, int]] = []  # from u climbing
        down: list[tuple[int, int]] = []  # from v climbing, reversed later
        parent, depth = self._parent, self._depth
        tails = self.inst.tails
        while u != v:
            if depth[u] >= depth[v]:
                p, a = parent[u]
                up.append((a, 1 if tails[a] == u else -1))
                u = p
            else:
                p, a = parent[v]
                down.append((a, 1 if tails[a] == p else -1))
                v = p
        return up + down[::-1]

    def cycle(self, arc: int) -> Cycle:
        return induced_cycle(self, arc)


# ---------------------------------------------------------------------------
# shortest paths


def _bellman_ford(
    n: int, edges: list[tuple[int, int, int]], dist: list[int | None]
) -> tuple[list[int | None], list[int], int | None]:
    """Label-correcting pass; returns ``(dist, pred_edge, node_on_negative_cycle)``."""
    pred = [-1] * n
    last = None
    for _ in range(n):
        last = None
        for k, (u, v, w) in enumerate(edges):
            du = dist[u]
            if du is not None and (dist[v] is None or du + w < dist[v]):
                dist[v] = du + w
                pred[v] = k
                last = v
        if last is None:
            return dist, pred, None
    return dist, pred, last


def _extract_cycle(edges, pred, start: int, n: int) -> list[int]:
    v = start
    for _ in range(n):
        v = edges[pred[v]][0]
    cyc = []
    u = v
    while True:
        k = pred[u]
        cyc.append(k)
        u = edges[k][0]
        if u == v:
            break
    cyc.reverse()
    return cyc


def residual(
    inst: Instance,
    flow: Sequence[int],
    cost: ScalarCost | None = None,
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
) -> ResidualGraph:
    lo = inst.lowers if lower is None else lower
    hi = inst.uppers if upper is None else upper
    out = []
    for a, (t, h) in enumerate(zip(inst.tails, inst.heads)):
        f = flow[a]
        c = None if cost is None else cost[a]
        if f < hi[a]:
            out.append(ResidualArc(t, h, a, 1, hi[a] - f, c))
        if f > lo[a]:
            out.append(ResidualArc(h, t, a, -1, f - lo[a], None if c is None else -c))
    return ResidualGraph(inst.node_count, tuple(out))


def _residual_edges(inst, flow, cost, lo, hi) -> tuple[list[tuple[int, int, int]], list[tuple[int, int]]]:
    edges, refs = [], []
    for a, (t, h) in enumerate(zip(inst.tails, inst.heads)):
        f = flow[a]
        if f < hi[a]:
            edges.append((t, h, cost[a]))
            refs.append((a, 1))
        if f > lo[a]:
            edges.append((h, t, -cost[a]))
            refs.append((a, -1))
    return edges, refs


def node_potentials(
    inst: Instance,
    flow: Sequence[int],
    cost: ScalarCost,
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
    root: int = 0,
) -> list[int]:
    """Shortest residual distances from ``root`` (0-based node index).

    Nodes that the root cannot reach receive distances through artificial
    root arcs of cost ``1 + sum(|c|)``.
    """
    lo = inst.lowers if lower is None else lower
    hi = inst.uppers if upper is None else upper
    n = inst.node_count
    edges, _ = _residual_edges(inst, flow, cost, lo, hi)
    big = 1 + sum(abs(c) for c in cost)
    edges.extend((root, v, big) for v in range(n) if v != root)
    dist: list[int | None] = [None] * n
    dist[root] = 0
    dist, _, neg = _bellman_ford(n, edges, dist)
    if neg is not None:
        raise NotOptimalError("negative residual cycle: the flow is not optimal")
    return [int(d) for d in dist]  # type: ignore[arg-type]


def reduced_costs(inst: Instance, potentials: Sequence[int], cost: ScalarCost) -> list[int]:
    return [c + potentials[t] - potentials[h] for c, t, h in zip(cost, inst.tails, inst.heads)]


def find_negative_cycle(
    inst: Instance,
    flow: Sequence[int],
    cost: ScalarCost,
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
) -> Cycle | None:
    lo = inst.lowers if lower is None else lower
    hi = inst.uppers if upper is None else upper
    n = inst.node_count
    edges, refs = _residual_edges(inst, flow, cost, lo, hi)
    dist, pred, neg = _bellman_ford(n, edges, [0] * n)
    if neg is None:
        return None
    ks = _extract_cycle(edges, pred, neg, n)
    return make_cycle(inst, [refs[k] for k in ks], flow, lo, hi)


def check_optimal(
    inst: Instance,
    flow: Sequence[int],
    cost: ScalarCost,
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
) -> bool:
    return find_negative_cycle(inst, flow, cost, lower, upper) is None


def cancel_negative_cycles(
    inst: Instance,
    flow: Sequence[int],
    cost: ScalarCost,
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
) -> list[int]:
    """Improve a feasible flow until no negative residual cycle remains."""
    flow = list(flow)
    while True:
        cyc = find_negative_cycle(inst, flow, cost, lower, upper)
        if cyc is None:
            return flow
        for a, d in cyc.steps:
            flow[a] += d * cyc.max_step


# ---------------------------------------------------------------------------
# successive shortest paths


def min_cost_flow(
    inst: Instance,
    cost: ScalarCost,
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
) -> list[int]:
    """Cost-minimal feasible integer flow by successive shortest paths."""
    lo = inst.lowers if lower is None else lower
    hi = inst.uppers if upper is None else upper
    n, m = inst.node_count, inst.arc_count
    if len(cost) != m:
        raise ArityError("cost vector length does not match the arc count")
    for a in range(m):
        if lo[a] > hi[a]:
            raise InfeasibleError(f"arc {a} has empty bound interval [{lo[a]}, {hi[a]}]")
    tails, heads = inst.tails, inst.heads
    # saturate negative arcs so that every residual cost starts non-negative
    flow = [hi[a] if cost[a] < 0 else lo[a] for a in range(m)]
    net = node_excess(inst, flow)
    excess = [b - x for b, x in zip(inst.balances, net)]
    if sum(excess) != 0:
        raise InfeasibleError("balances do not sum to zero")
    out_arcs: list[list[int]] = [[] for _ in range(n)]
    in_arcs: list[list[int]] = [[] for _ in range(n)]
    for a in range(m):
        out_arcs[tails[a]].append(a)
        in_arcs[heads[a]].append(a)
    pot = [0] * n
    while True:
        sources = [v for v in range(n) if excess[v] > 0]
        if not sources:
            return flow
        dist: list[int | None] = [None] * n
        pred: list[tuple[int, int] | None] = [None] * n
        heap = []
        for s in sources:
            dist[s] = 0
            heap.append((0, s))
        heapq.heapify(heap)
        done = [False] * n
        target = -1
        while heap:
            d, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            if excess[u] < 0:
                target = u
                break
            for a in out_arcs[u]:
                if flow[a] < hi[a]:
                    v = heads[a]
                    nd = d + cost[a] + pot[u] - pot[v]
                    if not done[v] and (dist[v] is None or nd < dist[v]):
                        dist[v] = nd
                        pred[v] = (a, 1)
                        heapq.heappush(heap, (nd, v))
            for a in in_arcs[u]:
                if flow[a] > lo[a]:
                    v = tails[a]
                    nd = d - cost[a] + pot[u] - pot[v]
                    if not done[v] and (dist[v] is None or nd < dist[v]):
                        dist[v] = nd
                        pred[v] = (a, -1)
                        heapq.heappush(heap, (nd, v))
        if target < 0:
            raise InfeasibleError("remaining supply cannot reach any demand node")
        dt = dist[target]
        for v in range(n):
            if done[v]:
                pot[v] += dist[v]  # type: ignore[operator]
            else:
                pot[v] += dt  # type: ignore[operator]
        # trace back and augment
        path = []
        v = target
        while pred[v] is not None:
            a, d = pred[v]  # type: ignore[misc]
            path.append((a, d))
            v = tails[a] if d > 0 else heads[a]
        source = v
        amount = min(excess[source], -excess[target])
        for a, d in path:
            amount = min(amount, hi[a] - flow[a] if d > 0 else flow[a] - lo[a])
        for a, d in path:
            flow[a] += d * amount
        excess[source] -= amount
        excess[target] += amount


# ---------------------------------------------------------------------------
# tree structures


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def _forest_path(n, tails, heads, forest_arcs, src, dst):
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for a in forest_arcs:
        adj[tails[a]].append((heads[a], a))
        adj[heads[a]].append((tails[a], a))
    prev: dict[int, tuple[int, int]] = {src: (-1, -1)}
    stack = [src]
    while stack:
        u = stack.pop()
        if u == dst:
            break
        for v, a in adj[u]:
            if v not in prev:
                prev[v] = (u, a)
                stack.append(v)
    steps = []
    v = dst
    while v != src:
        u, a = prev[v]
        steps.append((a, 1 if tails[a] == u else -1))
        v = u
    return steps[::-1]


def _break_free_cycles(inst, flow, cost, lo, hi) -> list[int]:
    """Push flow around cycles of strictly-between-bounds arcs until they form a forest."""
    flow = list(flow)
    n, tails, heads = inst.node_count, inst.tails, inst.heads
    while True:
        dsu = _DSU(n)
        forest: list[int] = []
        cycle_steps = None
        for a in range(inst.arc_count):
            if lo[a] < flow[a] < hi[a]:
                if dsu.union(tails[a], heads[a]):
                    forest.append(a)
                else:
                    path = _forest_path(n, tails, heads, forest, heads[a], tails[a])
                    cycle_steps = [(a, 1)] + path
                    break
        if cycle_steps is None:
            return flow
        c = sum(d * cost[a] for a, d in cycle_steps)
        if c > 0:
            cycle_steps = [(a, -d) for a, d in reversed(cycle_steps)]
        step = min(hi[a] - flow[a] if d > 0 else flow[a] - lo[a] for a, d in cycle_steps)
        for a, d in cycle_steps:
            flow[a] += d * step


def extract_tree(
    inst: Instance,
    flow: Sequence[int],
    cost: ScalarCost,
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
) -> TreeFlow:
    """Build a tree structure certifying optimality of ``flow`` for ``cost``.

    Arcs strictly between their bounds are forced into the tree (cycles among
    them are cancelled first, which leaves the cost unchanged for an optimal
    flow). The tree is completed with zero reduced-cost arcs; when none
    connects two components the potentials of one side are shifted until a
    crossing arc becomes tight.
    """
    lo = tuple(inst.lowers if lower is None else lower)
    hi = tuple(inst.uppers if upper is None else upper)
    n, m = inst.node_count, inst.arc_count
    tails, heads = inst.tails, inst.heads
    flow = _break_free_cycles(inst, flow, cost, lo, hi)
    pot = node_potentials(inst, flow, cost, lo, hi)
    dsu = _DSU(n)
    tree: set[int] = set()
    for a in range(m):
        if lo[a] < flow[a] < hi[a] and dsu.union(tails[a], heads[a]):
            tree.add(a)
    red = reduced_costs(inst, pot, cost)
    for a in range(m):
        if red[a] == 0 and dsu.union(tails[a], heads[a]):
            tree.add(a)
    while True:
        cross_any = [a for a in range(m) if dsu.find(tails[a]) != dsu.find(heads[a])]
        if not cross_any:
            break
        comp = dsu.find(tails[cross_any[0]])
        k_nodes = [dsu.find(v) == comp for v in range(n)]
        crossing = [a for a in cross_any if k_nodes[tails[a]] != k_nodes[heads[a]]]
        best_pos = best_neg = None
        for a in crossing:
            zero = red[a] if k_nodes[tails[a]] else -red[a]
            if zero > 0 and (best_pos is None or zero < best_pos[0]):
                best_pos = (zero, a)
            if zero < 0 and (best_neg is None or zero > best_neg[0]):
                best_neg = (zero, a)
        delta, a_new = best_pos if best_pos is not None else best_neg  # type: ignore[misc]
        for v in range(n):
            if not k_nodes[v]:
                pot[v] += delta
        red = reduced_costs(inst, pot, cost)
        for a in range(m):
            if red[a] == 0 and dsu.union(tails[a], heads[a]):
                tree.add(a)
    return _assemble(inst, flow, tree, pot, lo, hi)


def _assemble(inst, flow, tree, pot, lo, hi) -> TreeFlow:
    n, m = inst.node_count, inst.arc_count
    tails, heads = inst.tails, inst.heads
    lset, uset = set(), set()
    for a in range(m):
        if a in tree:
            continue
        if flow[a] == lo[a]:
            lset.add(a)
        elif flow[a] == hi[a]:
            uset.add(a)
        else:
            raise AssertionError(f"non-tree arc {a} is not at a bound")
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for a in tree:
        adj[tails[a]].append((heads[a], a))
        adj[heads[a]].append((tails[a], a))
    parent = [(-1, -1)] * n
    depth = [-1] * n
    for r in range(n):
        if depth[r] >= 0:
            continue
        depth[r] = 0
        stack = [r]
        while stack:
            u = stack.pop()
            for v, a in sorted(adj[u]):
                if depth[v] < 0:
                    depth[v] = depth[u] + 1
                    parent[v] = (u, a)
                    stack.append(v)
    return TreeFlow(
        inst, tuple(flow), frozenset(tree), frozenset(lset), frozenset(uset),
        tuple(pot), tuple(lo), tuple(hi), tuple(parent), tuple(depth),
    )


def make_tree_flow(
    inst: Instance,
    flow: Sequence[int],
    tree_arcs,
    cost: ScalarCost | None = None,
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
) -> TreeFlow:
    """Wrap a flow and a caller-chosen spanning tree (or forest) into a TreeFlow.

    Potentials are derived from the tree (zero reduced cost on tree arcs) when
    ``cost`` is given, else left at zero.
    """
    lo = tuple(inst.lowers if lower is None else lower)
    hi = tuple(inst.uppers if upper is None else upper)
    dsu = _DSU(inst.node_count)
    for a in tree_arcs:
        if not dsu.union(inst.tails[a], inst.heads[a]):
            raise ValueError(f"tree arcs contain a cycle through arc {a}")
    tf = _assemble(inst, flow, set(tree_arcs), [0] * inst.node_count, lo, hi)
    if cost is None:
        return tf
    pot = [0] * inst.node_count
    order = sorted(range(inst.node_count), key=lambda v: tf._depth[v])
    for v in order:
        p, a = tf._parent[v]
        if a >= 0:
            pot[v] = pot[p] + cost[a] if inst.tails[a] == p else pot[p] - cost[a]
    return TreeFlow(tf.inst, tf.flow, tf.tree_arcs, tf.lower_set, tf.upper_set,
                    tuple(pot), lo, hi, tf._parent, tf._depth)


def solve_scalar_mcf(
    inst: Instance,
    cost: ScalarCost,
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
) -> TreeFlow:
    flow = min_cost_flow(inst, cost, lower, upper)
    return extract_tree(inst, flow, cost, lower, upper)


def _named_cost(inst: Instance, c) -> ScalarCost:
    if isinstance(c, str):
        return {"c1": inst.cost1, "c2": inst.cost2}[c]
    return c


def lexmin(
    inst: Instance,
    costs: Sequence[ScalarCost],
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
) -> list[int]:
    """Lexicographic minimum: optimise each cost on the zero reduced-cost arcs of the previous stage."""
    lo = list(inst.lowers if lower is None else lower)
    hi = list(inst.uppers if upper is None else upper)
    flow = min_cost_flow(inst, costs[0], lo, hi)
    for prev, nxt in zip(costs, costs[1:]):
        pot = node_potentials(inst, flow, prev, lo, hi)
        red = reduced_costs(inst, pot, prev)
        for a, r in enumerate(red):
            if r != 0:
                lo[a] = hi[a] = flow[a]
        flow = cancel_negative_cycles(inst, flow, nxt, lo, hi)
    return flow


def lexmin_flow(
    inst: Instance,
    order: tuple = ("c1", "c2"),
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
) -> Flow:
    return tuple(lexmin(inst, [_named_cost(inst, c) for c in order], lower, upper))


# ---------------------------------------------------------------------------
# induced cycles and composition


def induced_cycle(tf: TreeFlow, arc: int) -> Cycle:
    cached = tf._cycles.get(arc)
    if cached is not None:
        return cached
    if arc in tf.tree_arcs:
        raise ValueError(f"arc {arc} is a tree arc and induces no cycle")
    inst = tf.inst
    i, j = inst.tails[arc], inst.heads[arc]
    if arc in tf.lower_set:
        steps = [(arc, 1)] + tf.tree_path(j, i)
    else:
        steps = [(arc, -1)] + tf.tree_path(i, j)
    cyc = make_cycle(inst, steps, tf.flow, tf.lower, tf.upper)
    tf._cycles[arc] = cyc
    return cyc


def apply_cycle(flow: Sequence[int], cyc: Cycle, theta: int = 1) -> Flow:
    if theta < 1:
        raise ValueError("theta must be a positive integer")
    if theta > cyc.max_step:
        raise ValueError(f"theta {theta} exceeds the residual bound {cyc.max_step}")
    out = list(flow)
    for a, d in cyc.steps:
        out[a] += d * theta
    return tuple(out)


def decompose_difference(tf: TreeFlow, other: Sequence[int]) -> dict[int, int]:
    """Integer coefficient per non-tree arc with ``other = flow + sum(coef * chi(C_a))``."""
    coeffs = {}
    for a in tf.non_tree_arcs():
        delta = other[a] - tf.flow[a]
        coeffs[a] = delta if a in tf.lower_set else -delta
    if compose(tf, coeffs) != tuple(other):
        raise AssertionError("cycle decomposition does not reproduce the target flow")
    return coeffs


def compose(tf: TreeFlow, coeffs: dict[int, int]) -> Flow:
    out = list(tf.flow)
    for a, lam in coeffs.items():
        if lam:
            for b, d in induced_cycle(tf, a).steps:
                out[b] += lam * d
    return tuple(out)
