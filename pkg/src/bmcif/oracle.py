"""Brute-force ground truth for small instances."""

from __future__ import annotations

import enum
import itertools
import math
from typing import Iterable, Sequence

from .model import BiCost, Flow, Instance, evaluate_cost

GUARD = 10**7


class GuardExceeded(RuntimeError):
    """The instance is too large for exhaustive enumeration."""


class Supportedness(str, enum.Enum):
    EXTREME = "extreme"
    SUPPORTED = "supported-nonextreme"
    UNSUPPORTED = "unsupported"


def search_space(inst: Instance) -> int:
    return math.prod(a.upper - a.lower + 1 for a in inst.arcs)


def enumerate_all_integer_flows(inst: Instance, guard: int = GUARD) -> list[Flow]:
    """Every feasible integer flow, by arc-by-arc recursion.

    After each assignment both endpoints are checked: the flow still owed by
    a node must be reachable by its unassigned arcs. The last arc touching a
    node is forced by that node's balance instead of being branched on.
    """
    size = search_space(inst)
    if size > guard:
        raise GuardExceeded(f"search space {size} exceeds the guard {guard}")
    n, m = inst.node_count, inst.arc_count
    tails, heads, lo, hi = inst.tails, inst.heads, inst.lowers, inst.uppers
    last = [-1] * n
    # range of (out - in) still achievable by unassigned arcs, per node
    span_lo = [0] * n
    span_hi = [0] * n
    for a in range(m):
        last[tails[a]] = last[heads[a]] = a
        span_lo[tails[a]] += lo[a]
        span_hi[tails[a]] += hi[a]
        span_lo[heads[a]] -= hi[a]
        span_hi[heads[a]] -= lo[a]
    for v in range(n):
        if last[v] < 0 and inst.balances[v] != 0:
            return []
    # flow each node still has to send: balance - (out - in) so far
    need = list(inst.balances)
    flow = [0] * m
    out: list[Flow] = []

    def rec(a: int) -> None:
        if a == m:
            out.append(tuple(flow))
            return
        t, h = tails[a], heads[a]
        span_lo[t] -= lo[a]
        span_hi[t] -= hi[a]
        span_lo[h] += hi[a]
        span_hi[h] += lo[a]
        if last[t] == a:
            candidates: Iterable[int] = (need[t],)
        elif last[h] == a:
            candidates = (-need[h],)
        else:
            candidates = range(lo[a], hi[a] + 1)
        for x in candidates:
            if not lo[a] <= x <= hi[a]:
                continue
            need[t] -= x
            need[h] += x
            if span_lo[t] <= need[t] <= span_hi[t] and span_lo[h] <= need[h] <= span_hi[h]:
                flow[a] = x
                rec(a + 1)
            need[t] += x
            need[h] -= x
        span_lo[t] += lo[a]
        span_hi[t] += hi[a]
        span_lo[h] -= hi[a]
        span_hi[h] -= lo[a]

    rec(0)
    return out


def dominates(p: Sequence[int], q: Sequence[int]) -> bool:
    return p[0] <= q[0] and p[1] <= q[1] and tuple(p) != tuple(q)


def filter_nondominated(points: Iterable[Sequence[int]]) -> list[BiCost]:
    """Nondominated subset, sorted by the first objective."""
    best: list[BiCost] = []
    for p in sorted({BiCost(*p) for p in points}):
        if not best or p.c2 < best[-1].c2:
            best.append(p)
    return best


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def classify_supportedness(nondominated: Iterable[Sequence[int]]) -> dict[BiCost, Supportedness]:
    pts = sorted({BiCost(*p) for p in nondominated})
    hull: list[BiCost] = []
    for p in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    vertices = set(hull)
    labels = {}
    seg = 0
    for p in pts:
        if p in vertices:
            labels[p] = Supportedness.EXTREME
            continue
        while hull[seg + 1][0] < p[0]:
            seg += 1
        on_edge = _cross(hull[seg], hull[seg + 1], p) == 0
        labels[p] = Supportedness.SUPPORTED if on_edge else Supportedness.UNSUPPORTED
    return labels


def oracle_summary(inst: Instance, guard: int = GUARD) -> dict:
    """Flows, images and the classification of the nondominated set."""
    flows = enumerate_all_integer_flows(inst, guard)
    images = [evaluate_cost(inst, f) for f in flows]
    nd = filter_nondominated(images)
    labels = classify_supportedness(nd)
    nd_set = set(nd)
    supported = sorted(p for p, lab in labels.items() if lab is not Supportedness.UNSUPPORTED)
    sup_set = set(supported)
    return {
        "flows": flows,
        "images": images,
        "nondominated": nd,
        "labels": labels,
        "extreme": sorted(p for p, lab in labels.items() if lab is Supportedness.EXTREME),
        "supported": supported,
        "efficient_flows": [f for f, y in zip(flows, images) if y in nd_set],
        "supported_flows": [f for f, y in zip(flows, images) if y in sup_set],
    }


def enumerate_integer_points(lower: Sequence[int], upper: Sequence[int], guard: int = GUARD):
    """Every integer point of a box, as tuples."""
    size = math.prod(u - l + 1 for l, u in zip(lower, upper))
    if size > guard:
        raise GuardExceeded(f"box of {size} points exceeds the guard {guard}")
    return itertools.product(*(range(l, u + 1) for l, u in zip(lower, upper)))
