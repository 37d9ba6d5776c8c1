import pytest

from bmcif.frontier import (
    WeightVector,
    extreme_supported_points,
    face_networks,
    face_weight,
    faces,
    is_weight_optimal,
    lift_flow,
    reduce_network,
)
from bmcif.generators import gen_example_backarcs
from bmcif.mcf import NotOptimalError
from bmcif.model import Arc, InfeasibleError, Instance, evaluate_cost
from bmcif.oracle import Supportedness, enumerate_all_integer_flows, oracle_summary
from instances import FIVE_NODE, T1


def test_t1_extreme_points():
    assert [fp.point for fp in extreme_supported_points(T1)] == [(4, 6), (6, 2)]


def test_backarcs_has_two_extreme_points():
    assert len(extreme_supported_points(gen_example_backarcs(5, 5))) == 2


def test_ideal_point_gives_single_extreme_point():
    inst = Instance(2, (Arc(1, 2, 0, 2, 1, 1), Arc(1, 2, 0, 2, 2, 2)), (2, -2))
    pts = extreme_supported_points(inst)
    assert [fp.point for fp in pts] == [(2, 2)]
    assert faces(inst)[0][0] == WeightVector(1, 1)


def test_five_node_extreme_points_match_hull():
    labels = oracle_summary(FIVE_NODE)["labels"]
    hull = sorted(p for p, lab in labels.items() if lab is Supportedness.EXTREME)
    assert [fp.point for fp in extreme_supported_points(FIVE_NODE)] == hull


@pytest.mark.parametrize(
    "left, right, weight",
    [((3, 6), (8, 3), (3, 5)), ((4, 6), (6, 2), (4, 2)), ((0, 1), (1, 0), (1, 1))],
)
def test_face_weight(left, right, weight):
    lam = face_weight(left, right)
    assert lam == weight
    assert lam.value(left) == lam.value(right)


@pytest.mark.parametrize("left, right", [((6, 2), (4, 6)), ((4, 6), (5, 7)), ((4, 6), (4, 2))])
def test_face_weight_rejects_bad_pairs(left, right):
    with pytest.raises(ValueError):
        face_weight(left, right)


def test_reduce_t1_keeps_everything():
    red = reduce_network(T1, (4, 2), (2, 2, 0))
    assert red.kept_arcs == (0, 1, 2)
    assert red.adjusted_balances == T1.balances
    assert red.removed_arcs == ()


def test_reduce_removes_priced_arc_and_adjusts_balance():
    # arc 2 carries 3 units at a strictly positive reduced cost
    inst = Instance(
        3,
        (Arc(1, 2, 0, 5, 1, 1), Arc(2, 3, 0, 5, 1, 1), Arc(1, 3, 3, 5, 5, 5)),
        (5, 0, -5),
    )
    flow = (2, 2, 3)
    red = reduce_network(inst, (1, 1), flow)
    assert 2 in red.removed_arcs
    assert red.adjusted_balances == (2, 0, -2)
    assert lift_flow(red, red.base_reduced_flow) == flow


def test_reduce_rejects_non_optimal_flow():
    with pytest.raises(NotOptimalError):
        reduce_network(T1, (1, 0), (0, 0, 2))


def test_tree_only_reduced_network_has_single_flow():
    inst = Instance(3, (Arc(1, 2, 0, 3, 1, 4), Arc(2, 3, 0, 3, 1, 4), Arc(1, 3, 0, 3, 9, 9)), (2, 0, -2))
    red = reduce_network(inst, (1, 1), (2, 2, 0))
    assert red.network.arc_count == inst.node_count - 1
    assert len(enumerate_all_integer_flows(red.network)) == 1


def test_lift_flow():
    red = reduce_network(T1, (4, 2), (2, 2, 0))
    lifted = lift_flow(red, (0, 0, 2))
    assert lifted == (0, 0, 2)
    lam = WeightVector(4, 2)
    assert lam.value(evaluate_cost(T1, lifted)) == lam.value(evaluate_cost(T1, (2, 2, 0))) == 28
    assert is_weight_optimal(T1, lifted, lam)
    with pytest.raises(InfeasibleError):
        lift_flow(red, (1, 0, 0))


def test_extreme_sets_match_oracle(corpus):
    for inst in corpus:
        labels = oracle_summary(inst)["labels"]
        hull = sorted(p for p, lab in labels.items() if lab is Supportedness.EXTREME)
        assert [fp.point for fp in extreme_supported_points(inst)] == hull, inst.name


def test_face_networks_lie_on_supporting_line(corpus):
    for inst in corpus:
        for red, left, right in face_networks(inst):
            lam = red.weight
            assert lam.value(left.point) == lam.value(right.point)
            level = lam.value(left.point)
            for rflow in enumerate_all_integer_flows(red.network):
                lifted = lift_flow(red, rflow)
                assert red.restrict(lifted) == rflow
                assert lam.value(evaluate_cost(inst, lifted)) == level
                assert is_weight_optimal(inst, lifted, lam)
