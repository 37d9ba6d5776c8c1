"""Epsilon-constraint sweeps over the faces of the nondominated frontier.

Two integer models are available for one sweep step on a face network:

* ``standard``: one variable per arc, balance rows and one bound on ``c2``;
* ``compact``: one variable per non-tree arc of a tree solution, the
  coefficient of its induced cycle, with window rows keeping every arc
  inside its bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .distinct import SupportedVector
from .frontier import ReducedInstance, WeightVector, face_networks, lift_flow
from .ilp import LinearModel, solve_ilp
from .mcf import TreeFlow, compose, extract_tree, induced_cycle
from .model import BiCost, Flow, Instance, check_flow_feasible, evaluate_cost

VARIANTS = ("standard", "compact")


class ModelSize(NamedTuple):
    variables: int
    rows: int


def removed_cost(red: ReducedInstance) -> BiCost:
    """Constant cost of the arcs fixed outside the face network."""
    base = red.base
    c1 = sum(base.cost1[a] * red.base_flow[a] for a in red.removed_arcs)
    c2 = sum(base.cost2[a] * red.base_flow[a] for a in red.removed_arcs)
    return BiCost(c1, c2)


def build_standard(red: ReducedInstance, eps: int) -> LinearModel:
    """Arc-variable model; ``eps`` bounds ``c2`` of the lifted flow."""
    net = red.network
    n, m = net.node_count, net.arc_count
    model = LinearModel(list(net.lowers), list(net.uppers), list(net.cost1))
    for v in range(n):
        row = [0] * m
        for a in range(m):
            if net.tails[a] == v:
                row[a] += 1
            if net.heads[a] == v:
                row[a] -= 1
        model.add_row(row, "=", net.balances[v])
    model.add_row(list(net.cost2), "<=", eps - removed_cost(red).c2)
    return model


def epsilon_step_standard(red: ReducedInstance, eps: int) -> Flow | None:
    """Cheapest face flow (first objective) with ``c2 <= eps``; ``None`` if there is none."""
    res = solve_ilp(build_standard(red, eps))
    if res.status != "optimal":
        return None
    flow = tuple(res.assignment)
    if not check_flow_feasible(red.network, flow):
        raise AssertionError("standard model returned an infeasible flow")
    return flow


@dataclass(frozen=True)
class CompactModel:
    model: LinearModel
    arcs: tuple[int, ...]  # non-tree arc per variable
    window_arcs: tuple[int, ...]
    offset: BiCost  # cost of the tree flow


def face_tree(red: ReducedInstance) -> TreeFlow:
    """First-objective tree solution of the face network at its left endpoint."""
    net = red.network
    return extract_tree(net, red.base_reduced_flow, net.cost1)


def build_compact(red: ReducedInstance, tf: TreeFlow, eps: int) -> CompactModel:
    net = tf.inst
    arcs = tuple(tf.non_tree_arcs())
    lower, upper, obj, c2row = [], [], [], []
    chi_per_arc: dict[int, dict[int, int]] = {}
    for k, a in enumerate(arcs):
        slack_lo, slack_hi = tf.lower[a] - tf.flow[a], tf.upper[a] - tf.flow[a]
        if a in tf.lower_set:
            lower.append(slack_lo)
            upper.append(slack_hi)
        else:
            lower.append(-slack_hi)
            upper.append(-slack_lo)
        cyc = induced_cycle(tf, a)
        obj.append(cyc.cost.c1)
        c2row.append(cyc.cost.c2)
        for b, d in cyc.steps:
            chi_per_arc.setdefault(b, {})[k] = d
    model = LinearModel(lower, upper, obj)
    window = tuple(sorted(chi_per_arc))
    for b in window:
        row = [0] * len(arcs)
        for k, d in chi_per_arc[b].items():
            row[k] = d
        model.add_row(row, ">=", tf.lower[b] - tf.flow[b])
        model.add_row(row, "<=", tf.upper[b] - tf.flow[b])
    base = evaluate_cost(net, tf.flow)
    model.add_row(c2row, "<=", eps - removed_cost(red).c2 - base.c2)
    return CompactModel(model, arcs, window, base)


def epsilon_step_compact(red: ReducedInstance, tf: TreeFlow, eps: int) -> Flow | None:
    cm = build_compact(red, tf, eps)
    res = solve_ilp(cm.model)
    if res.status != "optimal":
        return None
    flow = compose(tf, dict(zip(cm.arcs, res.assignment)))
    if not check_flow_feasible(red.network, flow):
        raise AssertionError("compact model reconstructed an infeasible flow")
    if evaluate_cost(red.network, flow).c1 != cm.offset.c1 + res.objective:
        raise AssertionError("compact objective does not match the reconstructed flow")
    return flow


def model_dimensions(red: ReducedInstance, variant: str, tf: TreeFlow | None = None) -> ModelSize:
    """Variables and constraint rows, counting capacity and window rows two-sided."""
    net = red.network
    if variant == "standard":
        return ModelSize(net.arc_count, net.node_count + 2 * net.arc_count + 1)
    if variant == "compact":
        cm = build_compact(red, tf or face_tree(red), 0)
        return ModelSize(cm.model.variable_count, cm.model.row_count)
    raise ValueError(f"unknown variant {variant!r}")


class EpsilonStep(NamedTuple):
    eps: int | None  # None for the starting point
    point: BiCost
    witness: Flow


@dataclass
class EpsilonTrace:
    weight: WeightVector
    steps: list[EpsilonStep] = field(default_factory=list)
    solves: int = 0
    sizes: list[ModelSize] = field(default_factory=list)


def sweep_face(red: ReducedInstance, right: BiCost, variant: str) -> EpsilonTrace:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    trace = EpsilonTrace(red.weight)
    tf = face_tree(red) if variant == "compact" else None
    size = model_dimensions(red, variant, tf)
    flow = red.base_reduced_flow
    full = lift_flow(red, flow)
    y = evaluate_cost(red.base, full)
    trace.steps.append(EpsilonStep(None, y, full))
    while y != right:
        eps = y.c2 - 1
        if variant == "standard":
            nxt = epsilon_step_standard(red, eps)
        else:
            nxt = epsilon_step_compact(red, tf, eps)
        trace.solves += 1
        trace.sizes.append(size)
        if nxt is None:
            break
        flow = nxt
        full = lift_flow(red, flow)
        y = evaluate_cost(red.base, full)
        trace.steps.append(EpsilonStep(eps, y, full))
    return trace


def epsilon_sweep(inst: Instance, variant: str = "standard") -> list[EpsilonTrace]:
    return [sweep_face(red, right.point, variant) for red, _left, right in face_networks(inst)]


def all_supported_vectors_epsilon(inst: Instance, variant: str = "standard") -> list[SupportedVector]:
    found: dict[BiCost, Flow] = {}
    for trace in epsilon_sweep(inst, variant):
        for step in trace.steps:
            found.setdefault(step.point, step.witness)
    return [SupportedVector(p, found[p]) for p in sorted(found)]
