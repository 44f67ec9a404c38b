from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from cpnsep.fixtures import textbook_certificate
from cpnsep.formula import (
    BWD,
    FWD,
    LE,
    LT,
    Atom,
    DimensionMismatch,
    DnfFormula,
    eval_pair,
    render,
    specialize,
    transpose_formula,
)

from conftest import markings

E4 = (0, 0, 0, 1)
Z = (0, 0, 0, 0)


def test_textbook_formula_endpoints(msrc, mtgt3):
    f = textbook_certificate()
    assert eval_pair(f, msrc, msrc)
    assert eval_pair(f, mtgt3, mtgt3)
    assert not eval_pair(f, msrc, mtgt3)


def test_strict_atom_on_zero():
    f = DnfFormula(((Atom.two_sided(E4, E4, LT),),))
    assert not eval_pair(f, Z, Z)


def test_mixed_clause(msrc, mtgt4):
    clause = (Atom.two_sided(E4, E4, LE), Atom((0, 0, 0, -1), (0, 0, 0, -1), LT))
    assert eval_pair(DnfFormula((clause,)), msrc, mtgt4)


def test_dimension_checks():
    f = DnfFormula(((Atom.two_sided(E4, E4, LE),),))
    with pytest.raises(DimensionMismatch):
        eval_pair(f, (1, 2), (1, 2))
    with pytest.raises(DimensionMismatch):
        DnfFormula(((Atom((1,), (1,), LE), Atom((1, 2), (1, 2), LE)),))
    with pytest.raises(ValueError):
        DnfFormula(())
    with pytest.raises(ValueError):
        Atom((1,), (1,), "ge")


def test_specialize_trivial():
    f = DnfFormula(((Atom.two_sided((1,), (1,), LE),),))
    sep = specialize(f, (0,), FWD)
    assert all(sep.evaluate((Fr(k),)) for k in range(5))


def test_transpose_examples():
    a = Atom.two_sided(E4, E4, LE)
    assert a.transposed() == Atom(a.v, a.u, LE)
    f = textbook_certificate()
    assert transpose_formula(transpose_formula(f)) == f


def test_render(net):
    text = render(textbook_certificate(), net.places)
    assert text.splitlines()[0] == "[m(p4) < m'(p4)] |"


@given(markings(4), markings(4))
def test_transpose_swaps_arguments(m, m2):
    f = textbook_certificate()
    assert eval_pair(transpose_formula(f), m, m2) == eval_pair(f, m2, m)


@given(markings(4), markings(4), st.fractions(min_value=Fr(1, 10), max_value=10))
def test_homogeneity(m, m2, lam):
    f = textbook_certificate()
    scaled = lambda v: tuple(lam * x for x in v)  # noqa: E731
    assert eval_pair(f, scaled(m), scaled(m2)) == eval_pair(f, m, m2)


@given(markings(4), markings(4))
def test_specialize_pointwise(e, m):
    f = textbook_certificate()
    assert specialize(f, e, FWD).evaluate(m) == eval_pair(f, e, m)
    assert specialize(f, e, BWD).evaluate(m) == eval_pair(f, m, e)
    assert specialize(f, e, FWD).simplify().evaluate(m) == eval_pair(f, e, m)
