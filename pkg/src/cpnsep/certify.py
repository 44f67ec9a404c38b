"""Construction of locally closed bi-separators (unreachability certificates)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .formula import BWD, FWD, LE, LT, Atom, DnfFormula, eval_pair
from .linear import max_support, solve_exclusion, solve_state_equation
from .net import Marking, PetriNet
from .structural import max_siphon_empty, max_trap_empty


class ReachableInput(ValueError):
    """The target is reachable from the source within N_U; no certificate exists."""


@dataclass(frozen=True)
class Certificate:
    formula: DnfFormula
    U: frozenset
    msrc: Marking
    mtgt: Marking
    annotations: dict = field(default_factory=dict)  # (i, t, dir) -> j

    def size_ok(self) -> bool:
        bound = 2 * len(self.U) + 1
        return len(self.formula) <= bound and all(len(c) <= bound for c in self.formula.clauses)


def _indicator(net: PetriNet, X) -> tuple:
    return tuple(Fraction(int(p in X)) for p in net.places)


_ZERO = Fraction(0)


def _base_atom(net: PetriNet, msrc, mtgt) -> Atom:
    # prefer a place the target has more of; this keeps the backward
    # specialisation as tight as possible
    n = len(net.places)
    up = [i for i in range(n) if mtgt[i] > msrc[i]]
    down = [i for i in range(n) if msrc[i] > mtgt[i]]
    if up:
        i, sign = up[0], -1
    elif down:
        i, sign = down[0], 1
    else:
        raise ReachableInput("source equals target")
    a = tuple(Fraction(sign) if k == i else _ZERO for k in range(n))
    return Atom.two_sided(a, a, LE)


def _recurse(net: PetriNet, U: frozenset, msrc, mtgt, b) -> list:
    if not U:
        return [(_base_atom(net, msrc, mtgt),)]
    if solve_state_equation(net, b, U) is None:
        w = solve_exclusion(net, b, (), U)
        if w is None:
            raise ReachableInput("state equation and its dual are both infeasible")
        return [(Atom.two_sided(w.y, w.y, LE),)]
    U1 = max_support(net, b, U)
    excl = []
    for t in net.ordered(U - U1):
        w = solve_exclusion(net, b, (t,), U)
        if w is None:
            raise ReachableInput(f"no exclusion function for {t}")
        if w(msrc) > w(mtgt):
            # the non-strict atom already separates and is closed under U
            return [(Atom.two_sided(w.y, w.y, LE),)]
        excl.append(w)
    Q = max_siphon_empty(net, U1, msrc)
    R = max_trap_empty(net, U1, mtgt)
    cut = net.postset_transitions(Q, U1) | net.preset_transitions(R, U1)
    if not cut:
        raise ReachableInput("target is reachable with support " + ",".join(net.ordered(U1)))
    inner = _recurse(net, U1 - cut, msrc, mtgt, b)

    inv = tuple(Atom.two_sided(w.y, w.y, LE) for w in excl)
    iq, ir = _indicator(net, Q), _indicator(net, R)
    marked = Atom(tuple(-c for c in iq), tuple(-c for c in ir), LT)  # m(Q) + m'(R) > 0
    empty = Atom(ir, iq, LE)  # m(R) + m'(Q) <= 0
    clauses = [(Atom.two_sided(w.y, w.y, LT),) for w in excl]
    clauses.append(inv + (marked,))
    clauses.extend(inv + (empty,) + psi for psi in inner)
    return clauses


def construct_biseparator(
    net: PetriNet, U: Iterable[str], msrc: Marking, mtgt: Marking, annotate: bool = True
) -> Certificate:
    """Build a locally closed bi-separator for (msrc, mtgt) w.r.t. N_U.

    Raises :class:`ReachableInput` when the construction hits a step that
    only fails for reachable instances.
    """
    U = net.check_transitions(U)
    msrc, mtgt = net.marking(msrc), net.marking(mtgt)
    if msrc == mtgt:
        raise ReachableInput("source equals target")
    b = tuple(t - s for s, t in zip(msrc, mtgt))
    formula = DnfFormula(tuple(_recurse(net, U, msrc, mtgt, b)))
    assert eval_pair(formula, msrc, msrc) and eval_pair(formula, mtgt, mtgt)
    assert not eval_pair(formula, msrc, mtgt)
    cert = Certificate(formula, U, msrc, mtgt)
    if annotate:
        cert = Certificate(formula, U, msrc, mtgt, find_annotations(net, cert))
    return cert


def find_annotations(net: PetriNet, cert: Certificate) -> dict:
    """Fill (i, t, dir) -> j by running the checker's clause search."""
    from .check import check_certificate

    res = check_certificate(net, Certificate(cert.formula, cert.U, cert.msrc, cert.mtgt))
    if not res.accepted:
        raise AssertionError(f"constructed certificate rejected: {res.triple()}")
    return dict(res.annotations)


__all__ = ["Certificate", "ReachableInput", "construct_biseparator", "find_annotations", "FWD", "BWD"]
