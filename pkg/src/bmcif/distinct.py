"""Supported nondominated vectors via next distinct-cost flows.

Inside a face network every flow lies on one line in objective space, so the
first objective alone orders the vectors. From a first-objective optimal flow
the cheapest strictly positive proper cycle gives the next distinct value;
it is read off an all-pairs distance table of reduced costs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .aof import EnumerationStats, PartitionNode
from .frontier import ReducedInstance, face_networks, lift_flow
from .mcf import Cycle, NotOptimalError, cancel_negative_cycles, make_cycle, node_potentials, reduced_costs
from .model import BiCost, Flow, Instance, evaluate_cost


@dataclass(frozen=True)
class DistanceTable:
    """Shortest residual distances under reduced first-objective costs.

    ``dist[u, v]`` is ``inf`` when ``v`` is unreachable from ``u``.
    """

    dist: np.ndarray
    next_hop: np.ndarray
    edge: dict[tuple[int, int], tuple[int, int]]
    reduced: tuple[int, ...]
    potentials: tuple[int, ...]

    def path(self, u: int, v: int) -> list[tuple[int, int]]:
        if not np.isfinite(self.dist[u, v]):
            raise ValueError(f"node {v} is unreachable from {u}")
        steps = []
        while u != v:
            w = int(self.next_hop[u, v])
            steps.append(self.edge[(u, w)])
            u = w
        return steps


def _bounds(net, lower, upper):
    return (net.lowers if lower is None else lower), (net.uppers if upper is None else upper)


def distance_table(
    net: Instance,
    flow: Sequence[int],
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
) -> DistanceTable:
    lo, hi = _bounds(net, lower, upper)
    cost = net.cost1
    pot = node_potentials(net, flow, cost, lo, hi)
    red = reduced_costs(net, pot, cost)
    n = net.node_count
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    nxt = np.tile(np.arange(n), (n, 1))
    edge: dict[tuple[int, int], tuple[int, int]] = {}
    for a in range(net.arc_count):
        t, h = net.tails[a], net.heads[a]
        for d, u, v in ((1, t, h), (-1, h, t)):
            if (flow[a] < hi[a]) if d > 0 else (flow[a] > lo[a]):
                w = d * red[a]
                if w < 0:
                    raise NotOptimalError(f"residual arc of arc {a} has negative reduced cost {w}")
                if u != v and w < dist[u, v]:
                    dist[u, v] = w
                    edge[(u, v)] = (a, d)
    for k in range(n):
        cand = dist[:, k, None] + dist[None, k, :]
        better = cand < dist
        if better.any():
            dist = np.where(better, cand, dist)
            nxt = np.where(better, nxt[:, k, None], nxt)
    return DistanceTable(dist, nxt, edge, tuple(red), tuple(pot))


class PositiveCycle(NamedTuple):
    cycle: Cycle
    arc: int  # the positive reduced-cost arc that closes the cycle


def minimal_positive_cycle(
    net: Instance,
    flow: Sequence[int],
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
) -> PositiveCycle | None:
    """Cheapest proper residual cycle with strictly positive first-objective cost.

    Candidates are residual arcs with positive reduced cost (these sit at a
    bound, so their reverse copy is absent); each is closed by the shortest
    path back to its tail. Ties go to the lowest ``(tail, head, arc)``.
    """
    lo, hi = _bounds(net, lower, upper)
    table = distance_table(net, flow, lo, hi)
    red = table.reduced
    best = None
    for a in range(net.arc_count):
        t, h = net.tails[a], net.heads[a]
        if red[a] > 0 and flow[a] < hi[a]:
            i, j, d, w = t, h, 1, red[a]
        elif red[a] < 0 and flow[a] > lo[a]:
            i, j, d, w = h, t, -1, -red[a]
        else:
            continue
        back = table.dist[j, i]
        if not np.isfinite(back):
            continue
        key = (w + int(back), i, j, a)
        if best is None or key < best[0]:
            best = (key, d)
    if best is None:
        return None
    (value, i, j, a), d = best
    steps = [(a, d)] + table.path(j, i)
    cyc = make_cycle(net, steps, flow, lo, hi)
    if not cyc.is_proper() or cyc.cost.c1 != value or cyc.max_step < 1:
        raise AssertionError("distance-table cycle does not match its predicted cost")
    return PositiveCycle(cyc, a)


def second_distinct_cost_flow(
    net: Instance,
    flow: Sequence[int],
    lower: Sequence[int] | None = None,
    upper: Sequence[int] | None = None,
) -> Flow | None:
    """Next flow with strictly larger first objective and no value in between."""
    found = minimal_positive_cycle(net, flow, lower, upper)
    if found is None:
        return None
    out = list(flow)
    for a, d in found.cycle.steps:
        out[a] += d
    return tuple(out)


class SupportedVector(NamedTuple):
    point: BiCost
    witness: Flow


def face_vectors_adjusted(
    red: ReducedInstance, log: list | None = None
) -> tuple[dict[BiCost, Flow], int, int]:
    """Vectors of one face network with witnesses, plus partition node and leaf counts.

    When ``log`` is given, every step is appended to it as
    ``(lower, upper, flow, next_flow)`` with ``next_flow`` ``None`` at leaves.
    """
    found: dict[BiCost, Flow] = {}
    net = red.network
    c1 = net.cost1
    stack = [PartitionNode(list(net.lowers), list(net.uppers), red.base_reduced_flow)]
    nodes = leaves = 0
    while stack:
        node = stack.pop()
        nodes += 1
        # a tightened bound can break first-objective optimality of the seed
        flow = tuple(cancel_negative_cycles(net, node.flow, c1, node.lower, node.upper))
        node = PartitionNode(node.lower, node.upper, flow)
        _record(found, red, flow)
        step = minimal_positive_cycle(net, flow, node.lower, node.upper)
        if step is None:
            if log is not None:
                log.append((node.lower, node.upper, flow, None))
            leaves += 1
            continue
        other = list(flow)
        for a, d in step.cycle.steps:
            other[a] += d
        other_t = tuple(other)
        if log is not None:
            log.append((node.lower, node.upper, flow, other_t))
        _record(found, red, other_t)
        keep, move = node.split(other_t, step.arc)
        stack.append(move)
        stack.append(keep)
    return found, nodes, leaves


def merge_vectors(parts, stats: EnumerationStats | None = None) -> list[SupportedVector]:
    found: dict[BiCost, Flow] = {}
    for vectors, nodes, leaves in parts:
        for p, f in vectors.items():
            found.setdefault(p, f)
        if stats is not None:
            stats.nodes += nodes
            stats.leaves += leaves
            stats.per_face_leaves.append(leaves)
    return [SupportedVector(p, found[p]) for p in sorted(found)]


def all_supported_vectors_adjusted(
    inst: Instance, stats: EnumerationStats | None = None
) -> list[SupportedVector]:
    """Every supported nondominated vector with one witness flow, sorted by ``c1``."""
    parts = [face_vectors_adjusted(red) for red, _l, _r in face_networks(inst)]
    return merge_vectors(parts, stats)


def _record(found: dict, red, rflow: Flow) -> None:
    flow = lift_flow(red, rflow)
    y = evaluate_cost(red.base, flow)
    found.setdefault(y, flow)
