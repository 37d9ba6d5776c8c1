"""Enumeration of all supported efficient flows by binary partition.

Each face-restricted network is explored with a partition tree: a node holds
tightened arc bounds and one feasible flow; a proper residual cycle yields a
second flow, and the node splits on the first arc where the two differ.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .frontier import ReducedInstance, face_networks, lift_flow
from .mcf import Cycle, TreeFlow, _DSU, _forest_path, make_cycle
from .model import Flow, Instance


@dataclass
class PartitionNode:
    lower: list[int]
    upper: list[int]
    flow: Flow

    def split(self, other: Flow, arc: int) -> tuple[PartitionNode, PartitionNode]:
        """Children keeping ``self.flow`` and ``other`` respectively."""
        f, g = self.flow[arc], other[arc]
        keep_lo, keep_hi = list(self.lower), list(self.upper)
        move_lo, move_hi = list(self.lower), list(self.upper)
        if f < g:
            keep_hi[arc] = f
            move_lo[arc] = f + 1
        else:
            keep_lo[arc] = f
            move_hi[arc] = f - 1
        return PartitionNode(keep_lo, keep_hi, self.flow), PartitionNode(move_lo, move_hi, other)


@dataclass
class EnumerationStats:
    nodes: int = 0
    leaves: int = 0
    per_face_leaves: list[int] = field(default_factory=list)


def _scc(n: int, adj: list[list[int]]) -> list[int]:
    """Strongly connected component label per node (iterative Tarjan)."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    label = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(adj[v]):
                work[-1] = (v, i + 1)
                w = adj[v][i]
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    if low[v] < low[u]:
                        low[u] = low[v]
                if low[v] == index[v]:
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp[w] = label
                        if w == v:
                            break
                    label += 1
    return comp


def find_proper_cycle(
    net: Instance,
    flow: Sequence[int],
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
) -> Cycle | None:
    """Any residual cycle that never uses both copies of one arc, or ``None``.

    A proper cycle exists iff some one-way residual arc lies inside a strongly
    connected component, or the two-way residual arcs contain an undirected
    cycle.
    """
    lo = net.lowers if lower is None else lower
    hi = net.uppers if upper is None else upper
    n, m = net.node_count, net.arc_count
    tails, heads = net.tails, net.heads
    adj: list[list[int]] = [[] for _ in range(n)]
    out: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
    fwd = [False] * m
    bwd = [False] * m
    for a in range(m):
        t, h, f = tails[a], heads[a], flow[a]
        if f < hi[a]:
            fwd[a] = True
            adj[t].append(h)
            out[t].append((h, a, 1))
        if f > lo[a]:
            bwd[a] = True
            adj[h].append(t)
            out[h].append((t, a, -1))
    comp = _scc(n, adj)
    for a in range(m):
        if fwd[a] != bwd[a] and comp[tails[a]] == comp[heads[a]]:
            i, j = (tails[a], heads[a]) if fwd[a] else (heads[a], tails[a])
            path = _bfs_path(out, j, i)
            return make_cycle(net, [(a, 1 if fwd[a] else -1)] + path, flow, lo, hi)
    dsu = _DSU(n)
    forest: list[int] = []
    for a in range(m):
        if fwd[a] and bwd[a]:
            if dsu.union(tails[a], heads[a]):
                forest.append(a)
            else:
                path = _forest_path(n, tails, heads, forest, heads[a], tails[a])
                return make_cycle(net, [(a, 1)] + path, flow, lo, hi)
    return None


def _bfs_path(out, src: int, dst: int) -> list[tuple[int, int]]:
    prev: dict[int, tuple[int, int, int]] = {src: (-1, -1, 0)}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == dst:
            break
        for v, a, d in out[u]:
            if v not in prev:
                prev[v] = (u, a, d)
                queue.append(v)
    steps = []
    v = dst
    while v != src:
        u, a, d = prev[v]
        steps.append((a, d))
        v = u
    return steps[::-1]


def enumerate_feasible_flows(
    net: Instance,
    start: Sequence[int],
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
    stats: EnumerationStats | None = None,
) -> list[Flow]:
    """Every feasible flow of ``net`` within the bounds, each exactly once."""
    root = PartitionNode(
        list(net.lowers if lower is None else lower),
        list(net.uppers if upper is None else upper),
        tuple(start),
    )
    found = [root.flow]
    stack = [root]
    nodes = leaves = 0
    while stack:
        node = stack.pop()
        nodes += 1
        cyc = find_proper_cycle(net, node.flow, node.lower, node.upper)
        if cyc is None:
            leaves += 1
            continue
        other = list(node.flow)
        for a, d in cyc.steps:
            other[a] += d
        other_t = tuple(other)
        found.append(other_t)
        arc = next(a for a in range(net.arc_count) if node.flow[a] != other_t[a])
        keep, move = node.split(other_t, arc)
        stack.append(move)
        stack.append(keep)
    if stats is not None:
        stats.nodes += nodes
        stats.leaves += leaves
        stats.per_face_leaves.append(leaves)
    return found


def enumerate_optimal_flows(
    red: ReducedInstance,
    tf: TreeFlow | Sequence[int] | None = None,
    stats: EnumerationStats | None = None,
) -> list[Flow]:
    """All feasible flows of a face network, as flows on the reduced arcs."""
    if tf is None:
        start = red.base_reduced_flow
    else:
        flow = tf.flow if isinstance(tf, TreeFlow) else tuple(tf)
        start = red.restrict(flow) if len(flow) == red.base.arc_count else flow
    return enumerate_feasible_flows(red.network, start, stats=stats)


def all_supported_flows(inst: Instance, stats: EnumerationStats | None = None) -> list[Flow]:
    """Every supported efficient flow, each once, grouped face by face."""
    seen: set[Flow] = set()
    out: list[Flow] = []
    for red, _left, _right in face_networks(inst):
        for rflow in enumerate_optimal_flows(red, stats=stats):
            flow = lift_flow(red, rflow)
            if flow not in seen:
                seen.add(flow)
                out.append(flow)
    return out
