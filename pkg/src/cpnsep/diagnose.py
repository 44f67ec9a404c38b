"""Counterexamples for failed t-implications.

Diagnostic only: this module uses the general LP and is never consulted
by the checker's accept/reject logic.
"""

from __future__ import annotations

from fractions import Fraction

from .formula import LE, LT, Atom
from .linear import GE, GT, LinSystem, Sat, feasible
from .net import PetriNet


def implication_counterexample(net: PetriNet, psi: Atom, t: str, psi2: Atom):
    """Some (m, m') with psi(m, m'), m' >= pre(t) and not psi2(m, m' + delta(t)), or None."""
    n = len(net.places)
    sys = LinSystem()
    xs = [sys.var(("m", i)) for i in range(n)]
    ys = [sys.var(("m2", i)) for i in range(n)]
    sys.add({v: c for v, c in zip(xs + ys, psi.u + psi.v) if c}, psi.rel, 0)
    pre, delta = net.pre(t), net.delta(t)
    for y, w in zip(ys, pre):
        if w:
            sys.add({y: 1}, GE, w)
    # psi2 violated at (m, m' + delta):  u2.m + v2.m' + v2.delta  (> or >=)  0
    shift = sum((c * d for c, d in zip(psi2.v, delta)), Fraction(0))
    sys.add({v: c for v, c in zip(xs + ys, psi2.u + psi2.v) if c}, GT if psi2.rel == LE else GE, -shift)
    res = feasible(sys)
    if not isinstance(res, Sat):
        return None
    m = tuple(res.assignment.get(x, Fraction(0)) for x in xs)
    m2 = tuple(res.assignment.get(y, Fraction(0)) for y in ys)
    return m, m2


def confirms_failure(net: PetriNet, psi: Atom, t: str, psi2: Atom, point) -> bool:
    """Exact membership of ``point`` in X minus Y."""
    m, m2 = point
    if any(v < 0 for v in m + m2) or not psi.evaluate(m, m2):
        return False
    if any(a < w for a, w in zip(m2, net.pre(t))):
        return False
    m3 = tuple(a + d for a, d in zip(m2, net.delta(t)))
    return not psi2.evaluate(m, m3)


__all__ = ["implication_counterexample", "confirms_failure", "LE", "LT"]
