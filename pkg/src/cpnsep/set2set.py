"""Set-to-set queries between convex polytopes, compiled to marking-to-marking form.

A polytope constraint ``a.x ~ c`` is brought to ``a.x >= c`` or ``a.x > c``
with integer data, then realised by a gadget of five places:

* ``pos``/``neg`` accumulate the positive and negative parts of ``a.x`` as a
  shared rail drains ``x``; ``norm`` cancels them pairwise,
* ``ge`` holds one token that pays ``c`` into ``neg`` (or ``|c|`` into ``pos``
  when ``c < 0``),
* ``slack`` adds any amount to ``neg`` and mirrors it into ``gt1``, which
  ``lossy`` drains,
* for strict constraints ``gt`` holds one token that ``strict`` can only
  move while ``gt1`` is marked, which forces a positive slack.

The control tokens empty together with the rail exactly when ``x``
satisfies the constraint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .linear import EQ, GE, GT, LE, LT
from .net import Marking, NetError, PetriNet

RELATIONS = (LE, LT, GE, GT, EQ)


class UnnormalizedConstraint(ValueError):
    pass


@dataclass(frozen=True)
class PolytopeConstraint:
    a: tuple
    rel: str
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(Fraction(v) for v in self.a))
        object.__setattr__(self, "c", Fraction(self.c))
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")

    def holds(self, x) -> bool:
        lhs = sum((ai * xi for ai, xi in zip(self.a, x) if ai), Fraction(0))
        return {
            LE: lhs <= self.c,
            LT: lhs < self.c,
            GE: lhs >= self.c,
            GT: lhs > self.c,
            EQ: lhs == self.c,
        }[self.rel]


@dataclass(frozen=True)
class ConvexPolytope:
    constraints: tuple

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if not self.constraints:
            raise ValueError("a polytope needs at least one constraint")
        if len({len(c.a) for c in self.constraints}) != 1:
            raise ValueError("constraints range over different dimensions")

    @classmethod
    def point(cls, m) -> "ConvexPolytope":
        """The singleton {m}, as two >= constraints per coordinate."""
        n = len(m)
        out = []
        for i, v in enumerate(m):
            e = [0] * n
            e[i] = 1
            out.append(PolytopeConstraint(e, GE, v))
            out.append(PolytopeConstraint([-c for c in e], GE, -Fraction(v)))
        return cls(tuple(out))

    @property
    def dim(self) -> int:
        return len(self.constraints[0].a)

    def contains(self, x) -> bool:
        return all(c.holds(x) for c in self.constraints)


@dataclass(frozen=True)
class NormalConstraint:
    """``a.x >= c`` (or ``>`` when strict) with integer data."""

    a: tuple
    c: int
    strict: bool = False

    def holds(self, x) -> bool:
        lhs = sum((ai * xi for ai, xi in zip(self.a, x) if ai), Fraction(0))
        return lhs > self.c if self.strict else lhs >= self.c


def normalize(con: PolytopeConstraint) -> list:
    a, c, rel = con.a, con.c, con.rel
    if rel in (LE, LT):
        a, c = tuple(-v for v in a), -c
    k = lcm(*(v.denominator for v in a + (c,)))
    ia = tuple(int(v * k) for v in a)
    ic = int(c * k)
    if rel == EQ:
        return [NormalConstraint(ia, ic), NormalConstraint(tuple(-v for v in ia), -ic)]
    return [NormalConstraint(ia, ic, rel in (LT, GT))]


def normalize_polytope(P: ConvexPolytope) -> list:
    return [n for con in P.constraints for n in normalize(con)]


ROLES = ("pos", "neg", "ge", "gt1", "gt")


@dataclass(frozen=True)
class Gadget:
    net: PetriNet  # over shared places followed by the gadget places
    y: dict  # gadget place -> 0 or 1
    roles: dict  # gadget place -> (constraint index, role)


def build_gadget(constraints: Sequence[NormalConstraint], shared_places: Sequence[str], prefix: str = "g") -> Gadget:
    shared = list(shared_places)
    arcs = {}
    places, y, roles = [], {}, {}
    for j, con in enumerate(constraints):
        if not isinstance(con, NormalConstraint) or len(con.a) != len(shared):
            raise UnnormalizedConstraint(f"constraint {j} is not in normal form over {len(shared)} places")
        if not all(isinstance(v, int) for v in con.a + (con.c,)):
            raise UnnormalizedConstraint(f"constraint {j} has non-integer data")
        names = {r: f"{prefix}{j}.{r}" for r in ROLES}
        for r in ROLES:
            places.append(names[r])
            roles[names[r]] = (j, r)
            y[names[r]] = 0
        pos, neg, ge, gt1, gt = (names[r] for r in ROLES)
        arcs[f"{prefix}{j}.norm"] = ({pos: 1, neg: 1}, {})
        if con.c:
            y[ge] = 1
            arcs[f"{prefix}{j}.pay"] = ({ge: 1}, {neg if con.c > 0 else pos: abs(con.c)})
        arcs[f"{prefix}{j}.slack"] = ({}, {neg: 1, gt1: 1})
        arcs[f"{prefix}{j}.lossy"] = ({gt1: 1}, {})
        if con.strict:
            y[gt] = 1
            arcs[f"{prefix}{j}.strict"] = ({gt: 1, gt1: 1}, {gt1: 1})
    rail = {}
    for i, p in enumerate(shared):
        out = {}
        for j, con in enumerate(constraints):
            if con.a[i]:
                out[f"{prefix}{j}.{'pos' if con.a[i] > 0 else 'neg'}"] = abs(con.a[i])
        rail[f"{prefix}.drain.{p}"] = ({p: 1}, out)
    net = PetriNet.from_arcs(shared + places, {**rail, **arcs})
    return Gadget(net, y, roles)


def merge(*nets: PetriNet) -> PetriNet:
    """Union of nets; places may be shared, transitions may not."""
    places, arcs = [], {}
    for net in nets:
        places += [p for p in net.places if p not in places]
        for t in net.transitions:
            if t in arcs:
                raise NetError(f"transition {t} occurs in two fragments")
            pre = {p: w for p, w in zip(net.places, net.pre(t)) if w}
            post = {p: w for p, w in zip(net.places, net.post(t)) if w}
            arcs[t] = (pre, post)
    return PetriNet.from_arcs(places, arcs)


@dataclass(frozen=True)
class CompiledQuery:
    net: PetriNet
    msrc: Marking
    mtgt: Marking
    origin: dict = field(default_factory=dict)  # place of net -> ("place", p) | ("copy", p) | (side, j, role)

    def project(self, m) -> tuple:
        """Restrict a marking of the compiled net to the original places."""
        return tuple(v for p, v in zip(self.net.places, m) if self.origin[p][0] == "place")


def compile_query(net: PetriNet, A: ConvexPolytope, B: ConvexPolytope) -> CompiledQuery:
    """Reduce "some marking of A reaches some marking of B" to a marking query."""
    n = len(net.places)
    if A.dim != n or B.dim != n:
        raise ValueError("polytopes must range over the net's places")
    copies = [f"copy.{p}" for p in net.places]
    guess = PetriNet.from_arcs(
        list(net.places) + copies,
        {f"guess.{p}": ({}, {p: 1, q: 1}) for p, q in zip(net.places, copies)},
    )
    ga = build_gadget(normalize_polytope(A), copies, prefix="A")
    gb = build_gadget(normalize_polytope(B), net.places, prefix="B")
    taken = set(net.places) | set(net.transitions)
    fresh = (set(guess.places) | set(guess.transitions) | set(ga.net.places) | set(ga.net.transitions)
             | set(gb.net.places) | set(gb.net.transitions)) - set(net.places)
    if taken & fresh:
        raise NetError(f"net uses reserved names: {sorted(taken & fresh)}")
    out = merge(net, guess, ga.net, gb.net)
    origin = {p: ("place", p) for p in net.places}
    origin.update({q: ("copy", p) for p, q in zip(net.places, copies)})
    origin.update({g: ("A",) + r for g, r in ga.roles.items()})
    origin.update({g: ("B",) + r for g, r in gb.roles.items()})
    y = {**ga.y, **gb.y}
    src = out.marking({p: y.get(p, 0) for p in out.places})
    return CompiledQuery(out, src, out.marking(None), origin)
