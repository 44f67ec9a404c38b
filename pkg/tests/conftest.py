from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from cpnsep.fixtures import MSRC, MTGT3, MTGT4, n1
from cpnsep.net import PetriNet

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def net():
    return n1()


@pytest.fixture
def msrc():
    return MSRC


@pytest.fixture
def mtgt3():
    return MTGT3


@pytest.fixture
def mtgt4():
    return MTGT4


@st.composite
def small_nets(draw, max_places=4, max_transitions=4, max_weight=2):
    n = draw(st.integers(1, max_places))
    k = draw(st.integers(1, max_transitions))
    w = st.integers(0, max_weight)
    fm = draw(st.lists(st.lists(w, min_size=k, max_size=k), min_size=n, max_size=n))
    fp = draw(st.lists(st.lists(w, min_size=k, max_size=k), min_size=n, max_size=n))
    return PetriNet(tuple(f"p{i}" for i in range(n)), tuple(f"t{j}" for j in range(k)), fm, fp)


rationals = st.builds(Fraction, st.integers(0, 8), st.integers(1, 4))


def markings(n):
    return st.lists(st.one_of(st.just(Fraction(0)), rationals), min_size=n, max_size=n).map(tuple)


@st.composite
def net_and_marking(draw, **kw):
    net = draw(small_nets(**kw))
    return net, draw(markings(len(net.places)))


@st.composite
def net_and_pair(draw, **kw):
    net = draw(small_nets(**kw))
    n = len(net.places)
    return net, draw(markings(n)), draw(markings(n))


# one summary line per acceptance criterion -------------------------------------------------

ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for an acceptance criterion; the test body fills ``detail``."""
    number = request.node.get_closest_marker("criterion").args[0]
    rec = {"status": "FAIL", "detail": ""}
    ACCEPTANCE.setdefault(number, {})[request.node.nodeid] = rec
    yield rec


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker and call.when == "call":
        rec = ACCEPTANCE.get(marker.args[0], {}).get(item.nodeid)
        if rec is not None:
            rec["status"] = "PASS" if call.excinfo is None else "FAIL"
            if call.excinfo is not None and not rec["detail"]:
                rec["detail"] = str(call.excinfo.value).splitlines()[0][:160]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        recs = ACCEPTANCE[k].values()
        status = "PASS" if all(r["status"] == "PASS" for r in recs) else "FAIL"
        detail = "; ".join(r["detail"] for r in recs if r["detail"])
        terminalreporter.write_line(f"criterion {k:2d}: {status}  {detail}")
