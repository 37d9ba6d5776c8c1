import random

import pytest
from hypothesis import given, settings, strategies as st

from bmcif.mcf import (
    NotOptimalError,
    apply_cycle,
    cancel_negative_cycles,
    check_optimal,
    compose,
    decompose_difference,
    extract_tree,
    induced_cycle,
    lexmin_flow,
    make_tree_flow,
    min_cost_flow,
    node_potentials,
    reduced_costs,
    residual,
    solve_scalar_mcf,
)
from bmcif.model import Arc, BiCost, InfeasibleError, Instance, check_flow_feasible, evaluate_cost
from bmcif.oracle import enumerate_all_integer_flows
from instances import FIVE_NODE, FIVE_NODE_FLOW, FIVE_NODE_TREE, T1, small_random

LAMBDA_COST = T1.weighted_cost(4, 2)


def _brute_min(inst, cost):
    return min(sum(c * f for c, f in zip(cost, flow)) for flow in enumerate_all_integer_flows(inst, guard=10**9))


def _assert_tree_structure(tf):
    inst = tf.inst
    assert len(tf.tree_arcs) == inst.node_count - 1
    assert tf.tree_arcs | tf.lower_set | tf.upper_set == set(range(inst.arc_count))
    assert not (tf.tree_arcs & tf.lower_set) and not (tf.lower_set & tf.upper_set)
    assert all(tf.flow[a] == inst.lowers[a] for a in tf.lower_set)
    assert all(tf.flow[a] == inst.uppers[a] for a in tf.upper_set)


def test_t1_first_objective_optimum():
    tf = solve_scalar_mcf(T1, T1.cost1)
    assert tf.flow == (2, 2, 0)
    assert evaluate_cost(T1, tf.flow).c1 == 4
    _assert_tree_structure(tf)


def test_t1_second_objective_optimum():
    tf = solve_scalar_mcf(T1, T1.cost2)
    assert tf.flow == (0, 0, 2)
    assert evaluate_cost(T1, tf.flow).c2 == 2


def test_five_node_first_objective_optimum():
    tf = solve_scalar_mcf(FIVE_NODE, FIVE_NODE.cost1)
    assert evaluate_cost(FIVE_NODE, tf.flow).c1 == 96
    assert evaluate_cost(FIVE_NODE, FIVE_NODE_FLOW).c1 == 96
    assert check_optimal(FIVE_NODE, FIVE_NODE_FLOW, FIVE_NODE.cost1)
    _assert_tree_structure(tf)


def test_infeasible_instance_raises():
    inst = Instance(2, (Arc(1, 2, 0, 1, 1, 1),), (2, -2))
    with pytest.raises(InfeasibleError):
        min_cost_flow(inst, inst.cost1)


def test_lexicographic_optima():
    assert lexmin_flow(T1, ("c1", "c2")) == (2, 2, 0)
    assert lexmin_flow(T1, ("c2", "c1")) == (0, 0, 2)


def test_lexmin_with_single_feasible_flow():
    inst = Instance(2, (Arc(1, 2, 0, 3, 5, -1),), (3, -3))
    assert lexmin_flow(inst, ("c1", "c2")) == lexmin_flow(inst, ("c2", "c1")) == (3,)


def test_lexmin_breaks_ties_on_second_objective():
    # two parallel arcs with equal first cost; the second objective decides
    inst = Instance(2, (Arc(1, 2, 0, 2, 1, 5), Arc(1, 2, 0, 2, 1, 3)), (2, -2))
    assert lexmin_flow(inst, ("c1", "c2")) == (0, 2)


def test_potentials_for_weighted_cost():
    assert node_potentials(T1, (2, 2, 0), LAMBDA_COST) == [0, 8, 14]


def test_potentials_root_is_zero():
    pot = node_potentials(FIVE_NODE, FIVE_NODE_FLOW, FIVE_NODE.cost1)
    assert pot[0] == 0


def test_potentials_reject_non_optimal_flow():
    with pytest.raises(NotOptimalError):
        node_potentials(T1, (1, 1, 1), T1.cost1)


def test_reduced_costs():
    assert reduced_costs(T1, [0, 8, 14], LAMBDA_COST) == [0, 0, 0]
    assert reduced_costs(T1, [0, 0, 0], T1.cost1) == list(T1.cost1)
    assert reduced_costs(T1, [7, 7, 7], T1.cost2) == list(T1.cost2)


def test_check_optimal():
    assert check_optimal(T1, (2, 2, 0), T1.cost1)
    assert not check_optimal(T1, (1, 1, 1), T1.cost1)
    assert check_optimal(T1, (1, 1, 1), (0, 0, 0))


def test_residual_graph_of_t1():
    res = residual(T1, (2, 2, 0), T1.cost1)
    back = {(r.tail, r.head, r.capacity) for r in res.backward()}
    fwd = {(r.tail, r.head, r.capacity) for r in res.forward()}
    assert back == {(1, 0, 2), (2, 1, 2)}
    assert fwd == {(0, 2, 2)}
    assert res.find(2, 1).cost == 3
    assert res.find(0, -1).cost == -1


def test_five_node_induced_cycle_cost():
    tf = make_tree_flow(FIVE_NODE, FIVE_NODE_FLOW, FIVE_NODE_TREE, FIVE_NODE.cost1)
    assert 6 in tf.upper_set
    cyc = induced_cycle(tf, 6)
    assert cyc.cost == BiCost(7, -9)
    assert {a for a, _ in cyc.steps} == {4, 5, 6}
    assert cyc.chi == {6: -1, 4: -1, 5: 1}


def test_t1_induced_cycle():
    tf = make_tree_flow(T1, (2, 2, 0), {0, 1}, T1.cost1)
    cyc = induced_cycle(tf, 2)
    assert cyc.chi == {2: 1, 0: -1, 1: -1}
    assert cyc.cost == BiCost(1, -2)
    assert cyc.max_step == 2
    with pytest.raises(ValueError):
        induced_cycle(tf, 0)


def test_tree_with_cycle_rejected():
    with pytest.raises(ValueError):
        make_tree_flow(T1, (2, 2, 0), {0, 1, 2})


def test_apply_cycle():
    tf = make_tree_flow(T1, (2, 2, 0), {0, 1}, T1.cost1)
    cyc = induced_cycle(tf, 2)
    assert apply_cycle(tf.flow, cyc, 1) == (1, 1, 1)
    assert evaluate_cost(T1, (1, 1, 1)) == (5, 4)
    assert apply_cycle(tf.flow, cyc, 2) == (0, 0, 2)
    with pytest.raises(ValueError):
        apply_cycle(tf.flow, cyc, 3)


def test_decompose_difference():
    tf = make_tree_flow(T1, (2, 2, 0), {0, 1}, T1.cost1)
    assert decompose_difference(tf, (0, 0, 2)) == {2: 2}
    assert decompose_difference(tf, tf.flow) == {2: 0}


def test_five_node_decomposition_of_one_push():
    tf = make_tree_flow(FIVE_NODE, FIVE_NODE_FLOW, FIVE_NODE_TREE, FIVE_NODE.cost1)
    pushed = apply_cycle(tf.flow, induced_cycle(tf, 6), 1)
    coeffs = decompose_difference(tf, pushed)
    assert coeffs[6] == 1 and all(v == 0 for a, v in coeffs.items() if a != 6)
    shift = tuple(a - b for a, b in zip(evaluate_cost(FIVE_NODE, pushed), evaluate_cost(FIVE_NODE, tf.flow)))
    assert shift == (7, -9)


def _random_weights(rng):
    return rng.randint(1, 5), rng.randint(1, 5)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 5000), st.integers(1, 5), st.integers(1, 5))
def test_solver_is_optimal_and_certified(seed, w1, w2):
    inst = small_random(seed)
    cost = inst.weighted_cost(w1, w2)
    tf = solve_scalar_mcf(inst, cost)
    assert check_flow_feasible(inst, tf.flow)
    assert sum(c * f for c, f in zip(cost, tf.flow)) == _brute_min(inst, cost)
    _assert_tree_structure(tf)
    pot = node_potentials(inst, tf.flow, cost)
    red = reduced_costs(inst, pot, cost)
    for r in residual(inst, tf.flow).arcs:
        assert r.direction * red[r.arc] >= 0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 5000))
def test_induced_cycles_stay_in_tree_plus_arc(seed):
    inst = small_random(seed)
    tf = solve_scalar_mcf(inst, inst.cost1)
    w1, w2 = 3, 2
    for a in tf.non_tree_arcs():
        cyc = induced_cycle(tf, a)
        assert {b for b, _ in cyc.steps} <= tf.tree_arcs | {a}
        assert cyc.is_proper()
        assert cyc.max_step >= 0
        if cyc.max_step >= 1:
            moved = apply_cycle(tf.flow, cyc, 1)
            assert check_flow_feasible(inst, moved)
            before = evaluate_cost(inst, tf.flow)
            after = evaluate_cost(inst, moved)
            assert w1 * (after.c1 - before.c1) + w2 * (after.c2 - before.c2) == w1 * cyc.cost.c1 + w2 * cyc.cost.c2


def test_cancel_negative_cycles_reaches_optimum():
    flow = cancel_negative_cycles(FIVE_NODE, FIVE_NODE_FLOW, FIVE_NODE.cost2)
    assert check_optimal(FIVE_NODE, flow, FIVE_NODE.cost2)
    assert evaluate_cost(FIVE_NODE, flow).c2 == _brute_min(FIVE_NODE, FIVE_NODE.cost2)


def test_extract_tree_on_nonunique_optimum():
    inst = Instance(3, (Arc(1, 2, 0, 3, 1, 0), Arc(2, 3, 0, 3, 1, 0), Arc(1, 3, 0, 3, 2, 0)), (3, 0, -3))
    flow = (1, 1, 2)
    tf = extract_tree(inst, flow, inst.cost1)
    _assert_tree_structure(tf)
    assert evaluate_cost(inst, tf.flow).c1 == evaluate_cost(inst, flow).c1


def test_composition_round_trip_many_pairs():
    rng = random.Random(11)
    pairs = 0
    seed = 0
    while pairs < 50:
        inst = small_random(seed)
        seed += 1
        flows = enumerate_all_integer_flows(inst, guard=10**9)
        tf = solve_scalar_mcf(inst, inst.weighted_cost(*_random_weights(rng)))
        other = rng.choice(flows)
        coeffs = decompose_difference(tf, other)
        assert compose(tf, coeffs) == other
        base = evaluate_cost(inst, tf.flow)
        shift = [0, 0]
        for a, lam in coeffs.items():
            c = induced_cycle(tf, a).cost
            shift[0] += lam * c.c1
            shift[1] += lam * c.c2
        assert evaluate_cost(inst, other) == (base.c1 + shift[0], base.c2 + shift[1])
        pairs += 1
