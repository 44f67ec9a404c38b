"""Continuous Petri nets over exact rationals.

Markings are plain tuples of :class:`fractions.Fraction`, indexed by the
net's place order. Transition sets are frozensets of transition ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

Marking = tuple  # tuple[Fraction, ...]
Step = tuple  # (alpha: Fraction, transition id)
Number = Union[int, Fraction, str]


class NetError(ValueError):
    pass


class UnknownTransition(NetError):
    def __init__(self, names):
        self.names = sorted(names)
        super().__init__(f"unknown transition(s): {', '.join(self.names)}")


class NotEnabled(NetError):
    """Raised when a transition cannot be fired by the requested amount."""

    def __init__(self, transition: str, place: str, step: int | None = None):
        self.transition = transition
        self.place = place
        self.step = step
        where = "" if step is None else f" (step {step})"
        super().__init__(f"{transition} not enabled: insufficient tokens in {place}{where}")


def rat(x: Number) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class PetriNet:
    places: tuple
    transitions: tuple
    f_minus: tuple  # |P| rows of |T| naturals
    f_plus: tuple

    def __post_init__(self):
        object.__setattr__(self, "places", tuple(self.places))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "f_minus", tuple(tuple(int(w) for w in row) for row in self.f_minus))
        object.__setattr__(self, "f_plus", tuple(tuple(int(w) for w in row) for row in self.f_plus))
        if len(set(self.places)) != len(self.places):
            raise NetError("duplicate place id")
        if len(set(self.transitions)) != len(self.transitions):
            raise NetError("duplicate transition id")
        if set(self.places) & set(self.transitions):
            raise NetError("places and transitions must be disjoint")
        for mat in (self.f_minus, self.f_plus):
            if len(mat) != len(self.places) or any(len(r) != len(self.transitions) for r in mat):
                raise NetError("arc matrix shape does not match |P| x |T|")
            if any(w < 0 for r in mat for w in r):
                raise NetError("arc weights must be nonnegative")

    @classmethod
    def from_arcs(cls, places: Sequence[str], arcs: Mapping[str, tuple]) -> "PetriNet":
        """Build a net from ``{t: (pre, post)}`` where pre/post map places to weights."""
        pidx = {p: i for i, p in enumerate(places)}
        ts = list(arcs)
        fm = [[0] * len(ts) for _ in places]
        fp = [[0] * len(ts) for _ in places]
        for j, t in enumerate(ts):
            pre, post = arcs[t]
            for p, w in pre.items():
                fm[pidx[p]][j] += w
            for p, w in post.items():
                fp[pidx[p]][j] += w
        return cls(tuple(places), tuple(ts), fm, fp)

    @cached_property
    def place_index(self) -> dict:
        return {p: i for i, p in enumerate(self.places)}

    @cached_property
    def transition_index(self) -> dict:
        return {t: j for j, t in enumerate(self.transitions)}

    @cached_property
    def _pre(self) -> tuple:
        return tuple(tuple(row[j] for row in self.f_minus) for j in range(len(self.transitions)))

    @cached_property
    def _post(self) -> tuple:
        return tuple(tuple(row[j] for row in self.f_plus) for j in range(len(self.transitions)))

    @cached_property
    def _delta(self) -> tuple:
        return tuple(tuple(b - a for a, b in zip(pre, post)) for pre, post in zip(self._pre, self._post))

    @property
    def incidence(self) -> tuple:
        """F = F+ - F-, as |P| rows."""
        return tuple(tuple(b - a for a, b in zip(rm, rp)) for rm, rp in zip(self.f_minus, self.f_plus))

    def pre(self, t: str) -> tuple:
        return self._pre[self.transition_index[t]]

    def post(self, t: str) -> tuple:
        return self._post[self.transition_index[t]]

    def delta(self, t: str) -> tuple:
        return self._delta[self.transition_index[t]]

    def check_transitions(self, U: Iterable[str]) -> frozenset:
        U = frozenset(U)
        unknown = U - set(self.transitions)
        if unknown:
            raise UnknownTransition(unknown)
        return U

    def ordered(self, U: Iterable[str]) -> list:
        """Transitions of ``U`` in the net's order."""
        U = set(U)
        return [t for t in self.transitions if t in U]

    def places_of(self, X: Iterable[str]) -> list:
        X = set(X)
        return [p for p in self.places if p in X]

    def preset_transitions(self, X: Iterable[str], U: Iterable[str] | None = None) -> frozenset:
        """Transitions of ``U`` producing into some place of ``X`` (written pre(X))."""
        rows = [self.place_index[p] for p in X]
        ts = self.transitions if U is None else self.ordered(U)
        return frozenset(t for t in ts if any(self.f_plus[i][self.transition_index[t]] > 0 for i in rows))

    def postset_transitions(self, X: Iterable[str], U: Iterable[str] | None = None) -> frozenset:
        """Transitions of ``U`` consuming from some place of ``X`` (written post(X))."""
        rows = [self.place_index[p] for p in X]
        ts = self.transitions if U is None else self.ordered(U)
        return frozenset(t for t in ts if any(self.f_minus[i][self.transition_index[t]] > 0 for i in rows))

    def marking(self, values: Mapping[str, Number] | Sequence[Number] | None = None) -> Marking:
        """Normalize ``values`` into a marking of this net (missing places are 0)."""
        if values is None:
            return tuple(Fraction(0) for _ in self.places)
        if isinstance(values, Mapping):
            unknown = set(values) - set(self.places)
            if unknown:
                raise NetError(f"unknown place(s): {', '.join(sorted(unknown))}")
            m = tuple(rat(values.get(p, 0)) for p in self.places)
        else:
            if len(values) != len(self.places):
                raise NetError(f"marking has {len(values)} entries, net has {len(self.places)} places")
            m = tuple(rat(v) for v in values)
        if any(v < 0 for v in m):
            raise NetError("markings must be nonnegative")
        return m


def fire(net: PetriNet, m: Marking, alpha: Number, t: str) -> Marking:
    alpha = rat(alpha)
    if alpha <= 0:
        raise NetError("firing amount must be positive")
    if t not in net.transition_index:
        raise UnknownTransition([t])
    pre, delta = net.pre(t), net.delta(t)
    for p, have, need in zip(net.places, m, pre):
        if have < alpha * need:
            raise NotEnabled(t, p)
    out = tuple(v + alpha * d for v, d in zip(m, delta))
    assert all(v >= 0 for v in out)
    return out


def enabled(net: PetriNet, m: Marking, t: str) -> bool:
    """Whether ``t`` is alpha-enabled at ``m`` for some alpha > 0."""
    return all(need == 0 or have > 0 for have, need in zip(m, net.pre(t)))


def replay(net: PetriNet, m: Marking, seq: Iterable[Step]) -> Marking:
    for k, (alpha, t) in enumerate(seq):
        try:
            m = fire(net, m, alpha, t)
        except NotEnabled as e:
            raise NotEnabled(e.transition, e.place, k) from None
    return m


def transpose(net: PetriNet) -> PetriNet:
    return PetriNet(net.places, net.transitions, net.f_plus, net.f_minus)


def restrict(net: PetriNet, U: Iterable[str]) -> PetriNet:
    """The subnet N_U keeping only the transitions of ``U``."""
    U = net.check_transitions(U)
    cols = [j for j, t in enumerate(net.transitions) if t in U]
    return PetriNet(
        net.places,
        tuple(net.transitions[j] for j in cols),
        tuple(tuple(row[j] for j in cols) for row in net.f_minus),
        tuple(tuple(row[j] for j in cols) for row in net.f_plus),
    )


def support(seq: Iterable[Step]) -> frozenset:
    return frozenset(t for _, t in seq)


def reverse(seq: Sequence[Step]) -> list:
    return list(reversed(list(seq)))


def parse_sequence(text: str) -> list:
    """Parse ``"1/2 t1, 1/2 t3"`` into firing steps."""
    steps = text.replace(",", " ").split()
    if len(steps) % 2:
        raise NetError("a firing sequence alternates amounts and transitions")
    return [(Fraction(steps[i]), steps[i + 1]) for i in range(0, len(steps), 2)]
