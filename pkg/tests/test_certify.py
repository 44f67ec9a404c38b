from fractions import Fraction as Fr

import pytest
from hypothesis import given

from cpnsep.certify import ReachableInput, construct_biseparator
from cpnsep.check import check_certificate
from cpnsep.formula import BWD, FWD, LE, Atom, eval_pair, specialize
from cpnsep.net import PetriNet, restrict
from cpnsep.reach import reachable

from conftest import net_and_pair


def test_running_example_instance(net, msrc, mtgt3):
    cert = construct_biseparator(net, net.transitions, msrc, mtgt3)
    f = cert.formula
    assert len(f) == 3 and cert.size_ok()
    assert f.clauses[0] == (Atom.two_sided((0, 0, 0, 1), (0, 0, 0, 1), "lt"),)
    assert check_certificate(net, cert).accepted
    # every (clause, transition, direction) is annotated
    assert len(cert.annotations) == 2 * len(f) * len(net.transitions)


def test_empty_support_prefers_place_gained_by_target(net, msrc, mtgt3):
    cert = construct_biseparator(net, set(), msrc, mtgt3)
    assert cert.formula.clauses == ((Atom.two_sided((0, 0, -1, 0), (0, 0, -1, 0), LE),),)
    assert check_certificate(net, cert).accepted


def test_empty_support_falls_back_to_lost_place(net, msrc):
    cert = construct_biseparator(net, set(), msrc, (0, 0, 0, 0))
    assert cert.formula.clauses == ((Atom.two_sided((1, 0, 0, 0), (1, 0, 0, 0), LE),),)


def test_infeasible_state_equation(net):
    sub = restrict(net, {"t4"})
    cert = construct_biseparator(sub, {"t4"}, (0, 0, 1, 0), (0, 0, 0, 0))
    (clause,) = cert.formula.clauses
    (atom,) = clause
    assert atom.rel == LE and atom.u == tuple(-c for c in atom.v)
    assert atom.u == (0, 0, 1, 1)
    assert check_certificate(sub, cert).accepted


def test_reachable_input_detected(net, msrc, mtgt4):
    with pytest.raises(ReachableInput):
        construct_biseparator(net, net.transitions, msrc, mtgt4)
    with pytest.raises(ReachableInput):
        construct_biseparator(net, net.transitions, msrc, msrc)


def test_strict_exclusion_shortcut():
    # t moves a token from a to b; the target has more in a than the source
    net = PetriNet.from_arcs(["a", "b"], {"t": ({"a": 1}, {"b": 1})})
    cert = construct_biseparator(net, {"t"}, (Fr(1), Fr(0)), (Fr(2), Fr(0)))
    assert check_certificate(net, cert).accepted
    assert len(cert.formula) == 1


@given(net_and_pair(max_weight=2))
def test_construction_invariants(nmm):
    net, m, m2 = nmm
    if reachable(net, m, m2).reachable:
        return
    cert = construct_biseparator(net, net.transitions, m, m2)
    assert cert.size_ok()
    assert eval_pair(cert.formula, m, m) and eval_pair(cert.formula, m2, m2)
    assert not eval_pair(cert.formula, m, m2)
    assert check_certificate(net, cert).accepted
    assert specialize(cert.formula, m, FWD).evaluate(m)
    assert not specialize(cert.formula, m, FWD).evaluate(m2)
    assert specialize(cert.formula, m2, BWD).evaluate(m2)
    assert not specialize(cert.formula, m2, BWD).evaluate(m)
