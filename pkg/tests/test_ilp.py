import itertools
import math
import random
from fractions import Fraction

import pytest

from bmcif.ilp import SENSES, Constraint, LinearModel, solve_ilp, solve_lp


def test_lp_lower_bound_row():
    res = solve_lp(LinearModel([0], [5], [1], [Constraint((1,), ">=", 2)]))
    assert res.status == "optimal"
    assert res.assignment == (2,) and res.objective == 2


def test_lp_infeasible():
    res = solve_lp(LinearModel([0, 0], [1, 1], [1, 1], [Constraint((1, 1), ">=", 3)]))
    assert res.status == "infeasible"


def test_lp_fractional_vertex():
    # 6 - 2*lam <= 5  <=>  -2*lam <= -1
    res = solve_lp(LinearModel([0], [2], [1], [Constraint((-2,), "<=", -1)]))
    assert res.assignment == (Fraction(1, 2),)


def test_ilp_rounds_up():
    res = solve_ilp(LinearModel([0], [2], [1], [Constraint((-2,), "<=", -1)]))
    assert res.status == "optimal"
    assert res.assignment == (1,)
    assert 4 + res.objective == 5


def test_ilp_infeasible():
    assert solve_ilp(LinearModel([0], [2], [1], [Constraint((-2,), "<=", -5)])).status == "infeasible"


def test_ilp_zero_objective():
    res = solve_ilp(LinearModel([0, 0], [3, 3], [0, 0], [Constraint((1, 1), "=", 4)]))
    assert res.status == "optimal" and res.objective == 0
    assert sum(res.assignment) == 4


def test_empty_box_is_infeasible():
    assert solve_ilp(LinearModel([2], [1], [1])).status == "infeasible"


def test_model_shape_checked():
    with pytest.raises(ValueError):
        LinearModel([0], [1], [1, 2])
    m = LinearModel([0], [1], [1])
    with pytest.raises(ValueError):
        m.add_row([1, 1], "<=", 1)
    with pytest.raises(ValueError):
        Constraint((1,), "<", 1)


def _random_model(rng):
    n = rng.randint(1, 6)
    lower = [rng.randint(-3, 1) for _ in range(n)]
    upper = [lo + rng.randint(0, 4) for lo in lower]
    model = LinearModel(lower, upper, [rng.randint(-5, 5) for _ in range(n)])
    for _ in range(rng.randint(0, 6)):
        model.add_row([rng.randint(-5, 5) for _ in range(n)], rng.choice(SENSES), rng.randint(-6, 6))
    return model


def test_matches_enumeration_on_random_models():
    rng = random.Random(2024)
    for _ in range(100):
        model = _random_model(rng)
        best = None
        for x in itertools.product(*(range(lo, hi + 1) for lo, hi in zip(model.lower, model.upper))):
            if model.is_feasible(x):
                v = model.value(x)
                best = v if best is None else min(best, v)
        res = solve_ilp(model)
        lp = solve_lp(model)
        if best is None:
            assert res.status == "infeasible"
            continue
        assert res.status == "optimal"
        assert res.objective == best
        assert model.is_feasible(res.assignment)
        assert lp.status == "optimal" and lp.objective <= best
        assert math.ceil(lp.objective) <= best
