"""Largest empty siphons and traps of restricted nets."""

from __future__ import annotations

from typing import Iterable

from .net import Marking, PetriNet


def is_siphon(net: PetriNet, Q: Iterable[str], U: Iterable[str]) -> bool:
    Q = set(Q)
    return net.preset_transitions(Q, U) <= net.postset_transitions(Q, U)


def is_trap(net: PetriNet, R: Iterable[str], U: Iterable[str]) -> bool:
    R = set(R)
    return net.postset_transitions(R, U) <= net.preset_transitions(R, U)


def _greatest(net: PetriNet, U, m: Marking, produce, consume) -> frozenset:
    # Remove p while some t in U produces into p without consuming from the
    # remaining candidate set. The result does not depend on removal order.
    U = net.ordered(net.check_transitions(U))
    cols = [net.transition_index[t] for t in U]
    X = {i for i, v in enumerate(m) if v == 0}
    changed = True
    while changed:
        changed = False
        for i in sorted(X):
            for j in cols:
                if produce[i][j] > 0 and not any(consume[k][j] > 0 for k in X):
                    X.discard(i)
                    changed = True
                    break
    return frozenset(net.places[i] for i in X)


def max_siphon_empty(net: PetriNet, U: Iterable[str], m: Marking) -> frozenset:
    """The largest siphon Q of N_U with m(Q) = 0."""
    return _greatest(net, U, m, net.f_plus, net.f_minus)


def max_trap_empty(net: PetriNet, U: Iterable[str], m: Marking) -> frozenset:
    """The largest trap R of N_U with m(R) = 0."""
    return _greatest(net, U, m, net.f_minus, net.f_plus)
