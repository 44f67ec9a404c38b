import itertools
from fractions import Fraction as Fr

from hypothesis import given, strategies as st

from cpnsep.linear import (
    EQ,
    GE,
    GT,
    LE,
    LT,
    LinSystem,
    Sat,
    Unsat,
    feasible,
    max_support,
    minimize,
    solve_exclusion,
    solve_state_equation,
    support_witness,
)

from conftest import small_nets


def system(*rows):
    sys = LinSystem()
    for coeffs, rel, rhs in rows:
        sys.add(coeffs, rel, rhs)
    return sys


def test_feasible_trivial_unsat():
    assert isinstance(feasible(system(({"x": 1}, LE, -1))), Unsat)
    assert isinstance(feasible(system(({"x": 1}, LT, 1), ({"x": 1}, GT, 1))), Unsat)


def test_feasible_strict_sat_is_verified():
    sys = system(({"x": 2}, LE, 4), ({"x": 1}, GT, 1))
    res = feasible(sys)
    assert isinstance(res, Sat) and sys.holds(res.assignment)


def test_free_variables():
    sys = LinSystem()
    sys.var("z", free=True)
    sys.add({"z": 1}, EQ, -3)
    res = feasible(sys)
    assert res.assignment["z"] == -3


def test_minimize():
    sys = system(({"x": 1, "y": 1}, GE, 2), ({"x": 1}, LE, 3))
    res = minimize(sys, {"x": 1, "y": 2})
    assert res.status == "optimal" and res.value == 2
    assert minimize(system(({"x": 1}, GE, 0)), {"x": -1}).status == "unbounded"
    assert minimize(system(({"x": 1}, LE, -1)), {"x": 1}).status == "infeasible"


def test_state_equation_example(net, msrc, mtgt3):
    b = tuple(t - s for s, t in zip(msrc, mtgt3))
    x = solve_state_equation(net, b, net.transitions)
    assert x is not None and x[3] == 0 and x[0] == x[2] and x[1] + x[2] == 1


def test_max_support_examples(net, msrc, mtgt3, mtgt4):
    T = net.transitions
    b3 = tuple(t - s for s, t in zip(msrc, mtgt3))
    b4 = tuple(t - s for s, t in zip(msrc, mtgt4))
    assert max_support(net, b3, T) == {"t1", "t2", "t3"}
    assert max_support(net, (0, 0, 0, 0), T) == frozenset()
    assert max_support(net, b4, T) == set(T)
    U, x = support_witness(net, b4, T)
    assert {t for t, v in zip(T, x) if v > 0} == U


def test_exclusion_examples(net, msrc, mtgt3, mtgt4):
    T = net.transitions
    b3 = tuple(t - s for s, t in zip(msrc, mtgt3))
    b4 = tuple(t - s for s, t in zip(msrc, mtgt4))
    assert solve_exclusion(net, b3, {"t4"}, T).y == (0, 0, 0, 1)
    assert solve_exclusion(net, (0, 0, 0, -1), (), T).y == (0, 0, 0, 1)
    assert solve_exclusion(net, b4, (), T) is None


GRID = [Fr(k, 2) for k in range(5)]


def grid_primal(net, b, U, S):
    U = net.ordered(U)
    for xs in itertools.product(GRID, repeat=len(U)):
        x = dict(zip(U, xs))
        if any(x[s] == 0 for s in S):
            continue
        if all(sum((net.delta(t)[i] * x[t] for t in U), Fr(0)) == b[i] for i in range(len(net.places))):
            return True
    return False


@given(small_nets(), st.data())
def test_farkas_dichotomy(net, data):
    n = len(net.places)
    b = tuple(data.draw(st.lists(st.integers(-2, 2), min_size=n, max_size=n)))
    U = data.draw(st.sets(st.sampled_from(net.transitions)))
    S = data.draw(st.sets(st.sampled_from(sorted(U)))) if U else set()
    primal = solve_state_equation(net, b, U) is not None and S <= max_support(net, b, U)
    dual = solve_exclusion(net, b, S, U)
    assert primal != (dual is not None)
    if dual is not None:
        assert dual.satisfies(net, b, S, U)
        assert not grid_primal(net, b, U, S)


@given(small_nets(), st.data())
def test_max_support_monotone_and_convex(net, data):
    n = len(net.places)
    b = tuple(data.draw(st.lists(st.integers(-2, 2), min_size=n, max_size=n)))
    V = set(data.draw(st.sets(st.sampled_from(net.transitions))))
    U = set(data.draw(st.sets(st.sampled_from(sorted(V))))) if V else set()
    assert max_support(net, b, U) <= max_support(net, b, V)
    res = support_witness(net, b, V)
    x1 = solve_state_equation(net, b, V)
    if res is None:
        assert x1 is None
        return
    x2 = res[1]
    mid = tuple((a + c) / 2 for a, c in zip(x1, x2))
    for i in range(n):
        assert sum((net.delta(t)[i] * v for t, v in zip(net.transitions, mid)), Fr(0)) == b[i]
    assert {t for t, v in zip(net.transitions, mid) if v} == {t for t, a, c in zip(net.transitions, x1, x2) if a or c}


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.sampled_from([LE, LT, EQ]), st.integers(-4, 4)),
                min_size=1, max_size=4))
def test_feasible_agrees_with_grid(rows):
    sys = system(*(({"x": a, "y": c}, rel, r) for a, c, rel, r in rows))
    res = feasible(sys)
    grid = [Fr(k, 4) for k in range(0, 41)]
    found = any(sys.holds({"x": x, "y": y}) for x in grid for y in grid)
    if isinstance(res, Sat):
        assert sys.holds(res.assignment)
    else:
        assert not found
