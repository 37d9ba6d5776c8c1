import itertools

import pytest

from bmcif.epsilon import (
    VARIANTS,
    all_supported_vectors_epsilon,
    build_compact,
    epsilon_step_compact,
    epsilon_step_standard,
    epsilon_sweep,
    face_tree,
    model_dimensions,
)
from bmcif.frontier import face_networks, reduce_network
from bmcif.generators import gen_example_backarcs
from bmcif.mcf import compose, make_tree_flow
from bmcif.model import Arc, Instance, evaluate_cost
from bmcif.oracle import enumerate_all_integer_flows, oracle_summary
from instances import FIVE_NODE, T1

T1_FACE = reduce_network(T1, (4, 2), (2, 2, 0))
T1_TREE = make_tree_flow(T1, (2, 2, 0), {0, 1}, T1.cost1)


@pytest.mark.parametrize("eps, flow", [(5, (1, 1, 1)), (6, (2, 2, 0)), (1, None)])
def test_standard_step_t1(eps, flow):
    assert epsilon_step_standard(T1_FACE, eps) == flow


@pytest.mark.parametrize("eps, flow", [(5, (1, 1, 1)), (6, (2, 2, 0)), (1, None)])
def test_compact_step_t1(eps, flow):
    assert epsilon_step_compact(T1_FACE, T1_TREE, eps) == flow


def test_compact_model_t1():
    cm = build_compact(T1_FACE, T1_TREE, 5)
    model = cm.model
    assert cm.arcs == (2,)
    assert (model.lower, model.upper) == ([0], [2])
    assert model.objective == [1]
    assert cm.window_arcs == (0, 1, 2)
    eps_row = model.rows[-1]
    assert (eps_row.coeffs, eps_row.sense, eps_row.rhs) == ((-2,), "<=", 5 - 6)
    assert cm.offset == (4, 6)


def test_compact_step_keeps_tree_flow_when_bound_is_loose():
    assert epsilon_step_compact(T1_FACE, T1_TREE, 100) == T1_TREE.flow


def test_tree_only_network_has_no_variables():
    inst = Instance(3, (Arc(1, 2, 0, 3, 1, 4), Arc(2, 3, 0, 3, 1, 4)), (2, 0, -2))
    red = reduce_network(inst, (1, 1), (2, 2))
    tf = face_tree(red)
    assert build_compact(red, tf, 100).model.variable_count == 0
    assert epsilon_step_compact(red, tf, 16) == (2, 2)
    assert epsilon_step_compact(red, tf, 15) is None
    assert model_dimensions(red, "compact").variables == 0


def test_model_dimensions_t1():
    std = model_dimensions(T1_FACE, "standard")
    cmp_ = model_dimensions(T1_FACE, "compact", T1_TREE)
    assert (std.variables, cmp_.variables) == (3, 1)
    assert std.variables - cmp_.variables == T1.node_count - 1
    with pytest.raises(ValueError):
        model_dimensions(T1_FACE, "sparse")


@pytest.mark.parametrize("variant", VARIANTS)
def test_t1_sweep_trace(variant):
    (trace,) = epsilon_sweep(T1, variant)
    assert [(s.eps, s.point) for s in trace.steps] == [(None, (4, 6)), (5, (5, 4)), (3, (6, 2))]
    assert trace.solves == 2


@pytest.mark.parametrize("variant", VARIANTS)
def test_backarcs_sweep(variant):
    assert len(all_supported_vectors_epsilon(gen_example_backarcs(5, 5), variant)) == 6


@pytest.mark.parametrize("variant", VARIANTS)
def test_five_node_sweep(variant):
    pts = [v.point for v in all_supported_vectors_epsilon(FIVE_NODE, variant)]
    assert pts == oracle_summary(FIVE_NODE)["supported"]


def test_unknown_variant():
    with pytest.raises(ValueError):
        epsilon_sweep(T1, "sparse")


def test_traces_are_monotone(corpus):
    for inst in corpus:
        for trace in epsilon_sweep(inst, "compact"):
            pts = [s.point for s in trace.steps]
            assert all(a.c1 < b.c1 and a.c2 > b.c2 for a, b in zip(pts, pts[1:]))


def test_formulations_agree_step_by_step(corpus):
    for inst in corpus:
        for red, left, right in face_networks(inst):
            tf = face_tree(red)
            for eps in range(right.point.c2 - 1, left.point.c2 + 1):
                a = epsilon_step_standard(red, eps)
                b = epsilon_step_compact(red, tf, eps)
                assert (a is None) == (b is None)
                if a is not None:
                    assert evaluate_cost(red.network, a).c1 == evaluate_cost(red.network, b).c1


def test_compact_points_biject_with_face_flows(corpus):
    for inst in corpus:
        for red, _l, _r in face_networks(inst):
            tf = face_tree(red)
            model = build_compact(red, tf, 10**9).model
            box = itertools.product(*(range(lo, hi + 1) for lo, hi in zip(model.lower, model.upper)))
            rebuilt = [compose(tf, dict(zip(tf.non_tree_arcs(), x))) for x in box if model.is_feasible(x)]
            flows = enumerate_all_integer_flows(red.network)
            assert len(rebuilt) == len(set(rebuilt)) == len(flows)
            assert set(rebuilt) == set(flows)
