import random
from collections import Counter
from fractions import Fraction as Fr

import pytest

from cpnsep.certify import construct_biseparator
from cpnsep.check import check_certificate
from cpnsep.linear import EQ, GE, GT, LE, LT
from cpnsep.reach import reachable
from cpnsep.set2set import (
    ConvexPolytope,
    NormalConstraint,
    PolytopeConstraint,
    UnnormalizedConstraint,
    build_gadget,
    compile_query,
    normalize,
)


def gadget_accepts(g, places, x):
    m = g.net.marking({**dict(zip(places, x)), **g.y})
    return reachable(g.net, m, g.net.marking(None)).reachable


def test_normalize():
    assert normalize(PolytopeConstraint((1, -2), LE, 3)) == [NormalConstraint((-1, 2), -3)]
    assert normalize(PolytopeConstraint((Fr(1, 2), Fr(1, 3)), LT, 1)) == [NormalConstraint((-3, -2), -6, True)]
    assert normalize(PolytopeConstraint((1,), EQ, 2)) == [NormalConstraint((1,), 2), NormalConstraint((-1,), -2)]
    assert normalize(PolytopeConstraint((2,), GT, 0)) == [NormalConstraint((2,), 0, True)]


def test_unnormalized_rejected():
    with pytest.raises(UnnormalizedConstraint):
        build_gadget([PolytopeConstraint((1,), GE, 0)], ["p"])
    with pytest.raises(UnnormalizedConstraint):
        build_gadget([NormalConstraint((Fr(1, 2),), 0)], ["p"])


def test_trivial_constraint_accepts_everything():
    g = build_gadget([NormalConstraint((1,), 0)], ["p"])
    assert all(g.y[p] == 0 for p in g.y)
    for x in (0, Fr(1, 3), 5):
        assert gadget_accepts(g, ["p"], (x,))


def test_p4_at_least_two(net):
    g = build_gadget([NormalConstraint((0, 0, 0, 1), 2)], list(net.places))
    assert gadget_accepts(g, net.places, (0, 0, 0, 2))
    assert not gadget_accepts(g, net.places, (0, 0, 0, 1))


def test_figure_shape():
    # a1, a2 > 0, a3 < 0, c > 0, non-strict
    g = build_gadget([NormalConstraint((1, 2, -3), 4)], ["x1", "x2", "x3"])
    n = g.net
    arcs = Counter()
    for t in n.transitions:
        for p, w in zip(n.places, n.pre(t)):
            if w:
                arcs[(p, t, w)] += 1
        for p, w in zip(n.places, n.post(t)):
            if w:
                arcs[(t, p, w)] += 1
    assert arcs == Counter({
        ("x1", "g.drain.x1", 1): 1, ("g.drain.x1", "g0.pos", 1): 1,
        ("x2", "g.drain.x2", 1): 1, ("g.drain.x2", "g0.pos", 2): 1,
        ("x3", "g.drain.x3", 1): 1, ("g.drain.x3", "g0.neg", 3): 1,
        ("g0.pos", "g0.norm", 1): 1, ("g0.neg", "g0.norm", 1): 1,
        ("g0.ge", "g0.pay", 1): 1, ("g0.pay", "g0.neg", 4): 1,
        ("g0.slack", "g0.neg", 1): 1, ("g0.slack", "g0.gt1", 1): 1,
        ("g0.gt1", "g0.lossy", 1): 1,
    })
    assert g.y == {"g0.pos": 0, "g0.neg": 0, "g0.ge": 1, "g0.gt1": 0, "g0.gt": 0}


def test_gadget_matches_direct_evaluation():
    rng = random.Random(3)
    for _ in range(25):
        n = rng.randint(1, 3)
        cons = [NormalConstraint(tuple(rng.randint(-2, 2) for _ in range(n)), rng.randint(-2, 2), rng.random() < 0.4)
                for _ in range(rng.randint(1, 3))]
        places = [f"x{i}" for i in range(n)]
        g = build_gadget(cons, places)
        for _ in range(10):
            x = tuple(Fr(rng.randint(0, 8), rng.randint(1, 4)) for _ in range(n))
            assert gadget_accepts(g, places, x) == all(c.holds(x) for c in cons)


def test_compile_pinned(net, msrc):
    A = ConvexPolytope.point(msrc)
    q1 = compile_query(net, A, ConvexPolytope((PolytopeConstraint((0, 0, 0, 1), GE, 1),)))
    assert reachable(q1.net, q1.msrc, q1.mtgt).reachable
    q2 = compile_query(net, A, ConvexPolytope((PolytopeConstraint((0, 0, 0, 1), GE, 2),)))
    assert not reachable(q2.net, q2.msrc, q2.mtgt).reachable
    cert = construct_biseparator(q2.net, q2.net.transitions, q2.msrc, q2.mtgt)
    assert check_certificate(q2.net, cert).accepted
    q3 = compile_query(net, A, A)
    assert reachable(q3.net, q3.msrc, q3.mtgt).reachable


def test_compiled_markings_shape(net, msrc):
    q = compile_query(net, ConvexPolytope.point(msrc), ConvexPolytope((PolytopeConstraint((0, 0, 0, 1), LT, 1),)))
    assert all(v == 0 for v in q.mtgt)
    for p, v in zip(q.net.places, q.msrc):
        kind = q.origin[p][0]
        assert v == 0 if kind in ("place", "copy") else v in (0, 1)
    assert q.project(q.msrc) == (0, 0, 0, 0)


def test_compile_unreachable_from_empty_polytope(net):
    # A has no marking at all
    A = ConvexPolytope((PolytopeConstraint((1, 0, 0, 0), GE, 1), PolytopeConstraint((1, 0, 0, 0), LE, 0)))
    q = compile_query(net, A, ConvexPolytope.point((0, 0, 0, 0)))
    assert not reachable(q.net, q.msrc, q.mtgt).reachable
