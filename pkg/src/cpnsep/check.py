"""Checking locally closed bi-separators with one-variable linear programs.

Nothing here solves a multi-variable LP: every inclusion test between atoms
reduces to a system ``a_i * lam rel_i b_i`` over a single ``lam >= 0``,
decided by intersecting intervals. The grid of closure tasks
(direction x transition x clause) is embarrassingly parallel, and
:func:`check_certificate` aggregates it by task index so that sequential
and parallel runs agree exactly.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .formula import BWD, FWD, LE, LT, Atom, DnfFormula, eval_pair, transpose_formula
from .net import PetriNet, transpose

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# one-variable feasibility


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction | None  # None is +infinity
    lo_closed: bool = True
    hi_closed: bool = False
    empty: bool = False


def interval_of(a, rel: str, b) -> Interval:
    """Solutions lam >= 0 of ``a * lam rel b``."""
    a, b = Fraction(a), Fraction(b)
    strict = rel == LT
    if a == 0:
        ok = 0 < b if strict else 0 <= b
        return Interval(Fraction(0), None) if ok else Interval(Fraction(0), Fraction(0), empty=True)
    if a > 0:
        return Interval(Fraction(0), b / a, True, not strict)
    if b <= 0:
        return Interval(b / a, None, not strict, False)
    return Interval(Fraction(0), None)


@dataclass(frozen=True)
class Feasible:
    value: Fraction

    feasible = True


@dataclass(frozen=True)
class Infeasible:
    feasible = False


def one_var_feasible(constraints) -> Feasible | Infeasible:
    """Decide whether some lam >= 0 satisfies every ``(a, rel, b)``: ``a * lam rel b``."""
    lo, lo_closed = Fraction(0), True
    hi, hi_closed = None, False
    for a, rel, b in constraints:
        iv = interval_of(a, rel, b)
        if iv.empty:
            return Infeasible()
        if iv.lo > lo:
            lo, lo_closed = iv.lo, iv.lo_closed
        elif iv.lo == lo:
            lo_closed = lo_closed and iv.lo_closed
        if iv.hi is not None:
            if hi is None or iv.hi < hi:
                hi, hi_closed = iv.hi, iv.hi_closed
            elif iv.hi == hi:
                hi_closed = hi_closed and iv.hi_closed
    if hi is None:
        return Feasible(lo if lo_closed else lo + 1)
    if lo < hi:
        return Feasible(lo if lo_closed else (lo + hi) / 2)
    if lo == hi and lo_closed and hi_closed:
        return Feasible(lo)
    return Infeasible()


# ---------------------------------------------------------------------------
# atoms


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))


def atom_enables(net: PetriNet, atom: Atom, t: str) -> bool:
    """Whether some (m, m') satisfying ``atom`` has m' enabling ``t``."""
    if atom.rel == LT:
        return any(c < 0 for c in atom.u) or any(c < 0 for c in atom.v)
    # with b = -v: b.pre(t) >= 0, or (a, -b) = (u, v) has a negative entry
    bpre = -_dot(atom.v, net.pre(t))
    return bpre >= 0 or any(c < 0 for c in atom.u) or any(c < 0 for c in atom.v)


NOT_NEEDED = "not-needed"


@dataclass(frozen=True)
class Holds:
    lam: object  # Fraction, or NOT_NEEDED when the premise never enables t

    holds = True


@dataclass(frozen=True)
class Fails:
    holds = False


@dataclass(frozen=True)
class InclusionProblem:
    """Is {x >= l : a.x rel 0} included in {x : a2.x rel2 b2}?"""

    a: tuple
    a2: tuple
    b2: Fraction
    l: tuple
    rels: tuple  # (rel, rel2)

    def decide(self) -> Holds | Fails:
        rel, rel2 = self.rels
        dominate = [(-ai, LE, -a2i) for ai, a2i in zip(self.a, self.a2)]
        al = _dot(self.a, self.l)
        a2l = _dot(self.a2, self.l)
        # (lam a - a2).l = lam * al - a2l
        if rel2 == LE:
            options = [dominate + [(-al, LE, self.b2 - a2l)]]
        elif rel == LE:
            options = [dominate + [(-al, LT, self.b2 - a2l)]]
        else:
            options = [
                dominate + [(-al, LT, self.b2 - a2l)],
                dominate + [(al, LE, a2l - self.b2), (-al, LE, self.b2 - a2l), (-1, LT, 0)],
            ]
        for cons in options:
            res = one_var_feasible(cons)
            if res.feasible:
                return Holds(res.value)
        return Fails()


def inclusion_problem(net: PetriNet, psi: Atom, t: str, psi2: Atom) -> InclusionProblem:
    delta = net.delta(t)
    zeros = (Fraction(0),) * len(net.places)
    return InclusionProblem(
        a=psi.u + psi.v,
        a2=psi2.u + psi2.v,
        b2=-_dot(psi2.v, delta),
        l=zeros + tuple(Fraction(w) for w in net.pre(t)),
        rels=(psi.rel, psi2.rel),
    )


def atom_implies(net: PetriNet, psi: Atom, t: str, psi2: Atom) -> Holds | Fails:
    """Decide psi ~>_t psi2: (m, m') |= psi and m' -t-> m'' imply (m, m'') |= psi2."""
    if not atom_enables(net, psi, t):
        return Holds(NOT_NEEDED)
    return inclusion_problem(net, psi, t, psi2).decide()


def clause_implies(net: PetriNet, clause_i: Sequence[Atom], t: str, clause_j: Sequence[Atom]):
    """Return (ok, witnesses) where witnesses maps each atom index of clause_j
    to (index in clause_i, lam) of an implying atom."""
    witnesses = {}
    for k, target in enumerate(clause_j):
        for i, src in enumerate(clause_i):
            res = atom_implies(net, src, t, target)
            if res.holds:
                witnesses[k] = (i, res.lam)
                break
        else:
            return False, witnesses
    return True, witnesses


class _Closure:
    """Memoised clause-level implication for one direction."""

    def __init__(self, net: PetriNet, formula: DnfFormula):
        self.net = net
        self.formula = formula
        self.atoms = []
        index = {}
        self.clauses = []
        for c in formula.clauses:
            ids = []
            for a in c:
                if a not in index:
                    index[a] = len(self.atoms)
                    self.atoms.append(a)
                ids.append(index[a])
            self.clauses.append(ids)
        self.memo = {}

    def atom(self, i, t, j) -> bool:
        key = (i, t, j)
        hit = self.memo.get(key)
        if hit is None:
            hit = atom_implies(self.net, self.atoms[i], t, self.atoms[j]).holds
            self.memo[key] = hit
        return hit

    def clause(self, ci, t, cj) -> bool:
        src = self.clauses[ci]
        return all(any(self.atom(i, t, j) for i in src) for j in self.clauses[cj])

    def target(self, ci, t, hint=None):
        """Some j with clause ci ~>_t clause j, trying ``hint`` first."""
        if hint is not None:
            if 0 <= hint < len(self.clauses) and self.clause(ci, t, hint):
                return hint
            log.warning("annotation %s -[%s]-> %s does not hold; searching", ci, t, hint)
        for cj in range(len(self.clauses)):
            if cj != hint and self.clause(ci, t, cj):
                return cj
        return None


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Accept:
    annotations: dict  # (i, t, dir) -> j

    accepted = True


@dataclass(frozen=True)
class Reject:
    reason: str
    direction: str | None = None
    transition: str | None = None
    clause: int | None = None

    accepted = False

    def triple(self) -> str:
        if self.direction is None:
            return self.reason
        return f"{self.direction} {self.transition} {self.clause}: {self.reason}"


def _structure_problem(net: PetriNet, cert) -> str | None:
    unknown = set(cert.U) - set(net.transitions)
    if unknown:
        return f"unknown transitions in U: {sorted(unknown)}"
    n = len(net.places)
    if len(cert.msrc) != n or len(cert.mtgt) != n:
        return "endpoint markings do not match the net"
    if any(v < 0 for v in cert.msrc) or any(v < 0 for v in cert.mtgt):
        return "endpoint markings must be nonnegative"
    if cert.formula.dim != n:
        return "formula dimension does not match the net"
    for (i, t, d), j in cert.annotations.items():
        if d not in (FWD, BWD) or t not in cert.U or not 0 <= i < len(cert.formula):
            return f"malformed annotation {(i, t, d)} -> {j}"
    return None


_worker = {}


def _init_worker(net, formula, annotations):
    _worker["fwd"] = _Closure(net, formula)
    _worker["bwd"] = _Closure(transpose(net), transpose_formula(formula))
    _worker["ann"] = annotations


def _run_task(task):
    d, t, i = task
    return _worker[d].target(i, t, _worker["ann"].get((i, t, d)))


def closure_tasks(net: PetriNet, cert) -> list:
    return [(d, t, i) for d in (FWD, BWD) for t in net.ordered(cert.U) for i in range(len(cert.formula))]


def check_certificate(net: PetriNet, cert, jobs: int = 1) -> Accept | Reject:
    """Validate ``cert`` as a locally closed bi-separator for its endpoints in N_U."""
    problem = _structure_problem(net, cert)
    if problem:
        return Reject(f"structure: {problem}")
    f = cert.formula
    if not eval_pair(f, cert.msrc, cert.msrc):
        return Reject("endpoint: (source, source) does not satisfy the formula")
    if not eval_pair(f, cert.mtgt, cert.mtgt):
        return Reject("endpoint: (target, target) does not satisfy the formula")
    if eval_pair(f, cert.msrc, cert.mtgt):
        return Reject("endpoint: (source, target) satisfies the formula")
    tasks = closure_tasks(net, cert)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(net, f, cert.annotations)) as ex:
            results = list(ex.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        _init_worker(net, f, cert.annotations)
        results = []
        for task in tasks:
            results.append(_run_task(task))
            if results[-1] is None:
                break
    found = {}
    for (d, t, i), j in zip(tasks, results):
        if j is None:
            return Reject("no clause is t-implied", d, t, i)
        found[(i, t, d)] = j
    return Accept(found)
