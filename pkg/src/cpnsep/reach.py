"""Reachability in continuous Petri nets via the support fixpoint.

A marking is reachable with support exactly U iff (1) the state equation
has a solution with support U, (2) some sequence with support U is enabled
at the source and (3) some sequence with support U is backward-enabled at
the target. Conditions (2) and (3) are decided with empty-siphon
fixpoints; :func:`reachable` shrinks U from T until all three stabilise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .linear import support_witness
from .net import Marking, PetriNet, transpose
from .structural import max_siphon_empty


def max_fireable_set(net: PetriNet, U: Iterable[str], m: Marking) -> frozenset:
    """Largest V within U such that a firing sequence with support V is enabled at m."""
    V = net.check_transitions(U)
    while True:
        Q = max_siphon_empty(net, V, m)
        dead = net.postset_transitions(Q, V)
        if not dead:
            return V
        V = V - dead


def firing_order(net: PetriNet, U: Iterable[str], m: Marking) -> list:
    """Saturate forward from the places marked at m.

    Returns the transitions of U that become fireable, listed round by
    round. Every transition's preset is marked at m or fed by an earlier
    transition of the list.
    """
    U = net.ordered(U)
    marked = {i for i, v in enumerate(m) if v > 0}
    order = []
    remaining = list(U)
    while True:
        fresh = [t for t in remaining if all(w == 0 or i in marked for i, w in enumerate(net.pre(t)))]
        if not fresh:
            return order
        order.extend(fresh)
        remaining = [t for t in remaining if t not in fresh]
        for t in fresh:
            marked |= {i for i, w in enumerate(net.post(t)) if w > 0}


def order_is_realizable(net: PetriNet, order: list, m: Marking) -> bool:
    marked = {i for i, v in enumerate(m) if v > 0}
    for t in order:
        if any(w > 0 and i not in marked for i, w in enumerate(net.pre(t))):
            return False
        marked |= {i for i, w in enumerate(net.post(t)) if w > 0}
    return True


@dataclass(frozen=True)
class PositiveWitness:
    support: frozenset
    x: tuple  # over net.transitions
    fwd_order: tuple
    bwd_order: tuple


@dataclass(frozen=True)
class Reachable:
    witness: PositiveWitness
    rounds: int = 0

    reachable = True


@dataclass(frozen=True)
class Unreachable:
    max_u: frozenset
    rounds: int = 0

    reachable = False


def validate_witness(net: PetriNet, msrc: Marking, mtgt: Marking, w: PositiveWitness) -> bool:
    """Re-check a positive witness from scratch, exactly."""
    F = net.incidence
    for i in range(len(net.places)):
        if sum((F[i][j] * w.x[j] for j in range(len(net.transitions))), Fraction(0)) != mtgt[i] - msrc[i]:
            return False
    if any(v < 0 for v in w.x):
        return False
    if frozenset(t for t, v in zip(net.transitions, w.x) if v > 0) != w.support:
        return False
    if set(w.fwd_order) != w.support or len(w.fwd_order) != len(w.support):
        return False
    if set(w.bwd_order) != w.support or len(w.bwd_order) != len(w.support):
        return False
    return order_is_realizable(net, list(w.fwd_order), msrc) and order_is_realizable(
        transpose(net), list(w.bwd_order), mtgt
    )


def u_reachable(net: PetriNet, U: Iterable[str], msrc: Marking, mtgt: Marking) -> bool:
    """Whether mtgt is reachable from msrc by a sequence with support exactly U."""
    U = net.check_transitions(U)
    b = tuple(t - s for s, t in zip(msrc, mtgt))
    res = support_witness(net, b, U)
    if res is None or res[0] != U:
        return False
    return max_fireable_set(net, U, msrc) == U and max_fireable_set(transpose(net), U, mtgt) == U


def reachable(net: PetriNet, msrc: Marking, mtgt: Marking):
    """Decide msrc ->* mtgt; returns :class:`Reachable` or :class:`Unreachable`."""
    if tuple(msrc) == tuple(mtgt):
        zero = tuple(Fraction(0) for _ in net.transitions)
        return Reachable(PositiveWitness(frozenset(), zero, (), ()))
    b = tuple(t - s for s, t in zip(msrc, mtgt))
    back = transpose(net)
    U = frozenset(net.transitions)
    rounds = 0
    while True:
        rounds += 1
        res = support_witness(net, b, U)
        V = frozenset() if res is None else res[0]
        V = max_fireable_set(net, V, msrc)
        V = max_fireable_set(back, V, mtgt)
        if V == U:
            break
        U = V
    if not U:
        return Unreachable(U, rounds)
    w = PositiveWitness(
        U,
        res[1],
        tuple(firing_order(net, U, msrc)),
        tuple(firing_order(back, U, mtgt)),
    )
    return Reachable(w, rounds)
