"""The four-place running example and a hand-transcribed certificate for it."""

from __future__ import annotations

from fractions import Fraction

from .formula import LE, LT, Atom, DnfFormula
from .net import PetriNet

F_MINUS = ((1, 2, 2, 0), (0, 0, 1, 0), (0, 0, 0, 1), (0, 1, 0, 0))
F_PLUS = ((0, 0, 1, 0), (1, 0, 0, 0), (0, 1, 1, 0), (0, 1, 0, 1))


def n1() -> PetriNet:
    return PetriNet(("p1", "p2", "p3", "p4"), ("t1", "t2", "t3", "t4"), F_MINUS, F_PLUS)


MSRC = (Fraction(2), Fraction(0), Fraction(0), Fraction(0))
MTGT4 = (Fraction(0), Fraction(0), Fraction(0), Fraction(1))
MTGT3 = (Fraction(0), Fraction(0), Fraction(1), Fraction(0))
SIGMA = ((Fraction(1, 2), "t1"), (Fraction(1, 2), "t3"), (Fraction(1, 2), "t4"), (Fraction(1, 2), "t2"), (Fraction(1, 2), "t4"))


def conserved(m) -> Fraction:
    """m(p1) + m(p2) + 2 (m(p3) + m(p4)), invariant under every firing of N1."""
    return m[0] + m[1] + 2 * (m[2] + m[3])


def _e(*idx):
    return tuple(Fraction(int(i in idx)) for i in range(4))


_Z = _e()


def textbook_certificate() -> DnfFormula:
    """The four-clause bi-separator for (MSRC, MTGT3), as displayed in the literature.

    Clause k (0-based) reads:
      0: m(p4) < m'(p4)
      1: m(p4) <= m'(p4) and m(p4) + m'(p4) > 0
      2: m(p4) <= m'(p4) and m'(p1) + m'(p2) > 0
      3: m(p4) <= m'(p4) and m(p1) + m(p2) <= 0 and -m(p3) <= -m'(p3)
    """
    p4 = _e(3)
    inv = Atom.two_sided(p4, p4, LE)
    neg = lambda v: tuple(-c for c in v)  # noqa: E731
    return DnfFormula((
        (Atom.two_sided(p4, p4, LT),),
        (inv, Atom(neg(p4), neg(p4), LT)),
        (inv, Atom(_Z, neg(_e(0, 1)), LT)),
        (inv, Atom(_e(0, 1), _Z, LE), Atom.two_sided(neg(_e(2)), neg(_e(2)), LE)),
    ))


# Arrows of the displayed diagram: (from clause, transition, to clause), forward direction.
TEXTBOOK_ARROWS = (
    [(0, t, 0) for t in ("t1", "t2", "t3", "t4")]
    + [(i, "t4", 0) for i in (1, 2, 3)]
    + [(1, t, 1) for t in ("t1", "t2", "t3")]
    + [(2, "t1", 2), (2, "t3", 2), (2, "t2", 1)]
    + [(3, "t1", 3), (3, "t3", 3), (3, "t2", 1)]
)
