"""Extreme supported points, face weights, and face-restricted networks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .mcf import (
    NotOptimalError,
    TreeFlow,
    check_optimal,
    extract_tree,
    lexmin,
    node_potentials,
    reduced_costs,
)
from .model import Arc, BiCost, Flow, InfeasibleError, Instance, evaluate_cost


class WeightVector(NamedTuple):
    w1: int
    w2: int

    def cost(self, inst: Instance) -> tuple[int, ...]:
        return inst.weighted_cost(self.w1, self.w2)

    def value(self, y: Sequence[int]) -> int:
        return self.w1 * y[0] + self.w2 * y[1]


class FrontierPoint(NamedTuple):
    point: BiCost
    witness: TreeFlow


def face_weight(y_left: Sequence[int], y_right: Sequence[int]) -> WeightVector:
    """Normal of the segment between two adjacent extreme points."""
    if not (y_left[0] < y_right[0] and y_left[1] > y_right[1]):
        raise ValueError(
            f"points {tuple(y_left)} and {tuple(y_right)} are not a left/right nondominated pair"
        )
    return WeightVector(y_left[1] - y_right[1], y_right[0] - y_left[0])


def _witness(inst: Instance, flow: Sequence[int], cost) -> FrontierPoint:
    tf = extract_tree(inst, flow, cost)
    return FrontierPoint(evaluate_cost(inst, tf.flow), tf)


def extreme_supported_points(inst: Instance) -> list[FrontierPoint]:
    """All vertices of the upper image, sorted by the first objective.

    Dichotomic weighted-sum search between the two lexicographic optima. At
    each weight the first objective breaks ties, so the returned flow maps to
    a vertex rather than an interior point of a face.
    """
    c1, c2 = inst.cost1, inst.cost2
    left_flow = lexmin(inst, [c1, c2])
    right_flow = lexmin(inst, [c2, c1])
    left = _witness(inst, left_flow, c1)
    right = _witness(inst, right_flow, c2)
    if left.point == right.point:
        return [left]
    found = [left, right]
    stack = [(left.point, right.point)]
    while stack:
        yl, yr = stack.pop()
        lam = face_weight(yl, yr)
        wc = lam.cost(inst)
        flow = lexmin(inst, [wc, c1])
        y = evaluate_cost(inst, flow)
        if lam.value(y) < lam.value(yl):
            found.append(_witness(inst, flow, wc))
            stack.append((yl, y))
            stack.append((y, yr))
    found.sort(key=lambda fp: fp.point[0])
    return found


@dataclass(frozen=True)
class ReducedInstance:
    """The face-restricted network keeping only zero reduced-cost arcs.

    ``network`` is a standalone instance over the kept arcs (same node set,
    adjusted balances). ``kept_arcs[k]`` is the base index of its arc ``k``.
    """

    base: Instance
    weight: WeightVector
    kept_arcs: tuple[int, ...]
    adjusted_balances: tuple[int, ...]
    base_flow: Flow
    network: Instance

    @property
    def removed_arcs(self) -> tuple[int, ...]:
        kept = set(self.kept_arcs)
        return tuple(a for a in range(self.base.arc_count) if a not in kept)

    def restrict(self, flow: Sequence[int]) -> Flow:
        return tuple(flow[a] for a in self.kept_arcs)

    @property
    def base_reduced_flow(self) -> Flow:
        return self.restrict(self.base_flow)


def reduce_network(inst: Instance, weight: Sequence[int], tf: TreeFlow | Sequence[int]) -> ReducedInstance:
    weight = WeightVector(*weight)
    flow = tf.flow if isinstance(tf, TreeFlow) else tuple(tf)
    cost = weight.cost(inst)
    try:
        pot = node_potentials(inst, flow, cost)
    except NotOptimalError:
        raise NotOptimalError(f"flow is not optimal for weight {tuple(weight)}") from None
    red = reduced_costs(inst, pot, cost)
    kept = tuple(a for a in range(inst.arc_count) if red[a] == 0)
    bal = list(inst.balances)
    for a in range(inst.arc_count):
        if red[a] != 0:
            bal[inst.tails[a]] -= flow[a]
            bal[inst.heads[a]] += flow[a]
    network = Instance(inst.node_count, tuple(inst.arcs[a] for a in kept), tuple(bal),
                       name=f"{inst.name}@{weight.w1},{weight.w2}")
    return ReducedInstance(inst, weight, kept, tuple(bal), flow, network)


def lift_flow(red: ReducedInstance, rflow: Sequence[int]) -> Flow:
    from .model import check_flow_feasible

    if not check_flow_feasible(red.network, rflow):
        raise InfeasibleError("flow is not feasible on the reduced network")
    out = list(red.base_flow)
    for k, a in enumerate(red.kept_arcs):
        out[a] = rflow[k]
    return tuple(out)


def faces(inst: Instance) -> list[tuple[WeightVector, FrontierPoint, FrontierPoint]]:
    """Maximally nondominated faces as ``(weight, left, right)``.

    A single nondominated point is returned as one degenerate face with unit
    weights.
    """
    pts = extreme_supported_points(inst)
    if len(pts) == 1:
        return [(WeightVector(1, 1), pts[0], pts[0])]
    return [(face_weight(a.point, b.point), a, b) for a, b in zip(pts, pts[1:])]


def face_networks(inst: Instance) -> list[tuple[ReducedInstance, FrontierPoint, FrontierPoint]]:
    return [(reduce_network(inst, w, left.witness), left, right) for w, left, right in faces(inst)]


def is_weight_optimal(inst: Instance, flow: Sequence[int], weight: Sequence[int]) -> bool:
    return check_optimal(inst, flow, WeightVector(*weight).cost(inst))
