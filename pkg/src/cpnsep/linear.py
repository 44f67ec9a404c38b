"""Exact rational linear programming and the Farkas-style systems built on it.

The engine is a dense two-phase tableau simplex with Bland's rule. It never
rounds: entries are ``gmpy2.mpq`` when gmpy2 is importable and
``fractions.Fraction`` otherwise, and results are always handed back as
``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .net import PetriNet

try:  # pragma: no cover - exercised implicitly
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

LE, LT, EQ, GE, GT = "le", "lt", "eq", "ge", "gt"


def _frac(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    return Fraction(int(q.numerator), int(q.denominator))


@dataclass(frozen=True)
class LinConstraint:
    coeffs: Mapping  # variable -> Fraction
    rel: str  # LE, LT or EQ
    rhs: Fraction

    def holds(self, assignment: Mapping) -> bool:
        lhs = sum((Fraction(c) * assignment.get(v, 0) for v, c in self.coeffs.items()), Fraction(0))
        if self.rel == LE:
            return lhs <= self.rhs
        if self.rel == LT:
            return lhs < self.rhs
        return lhs == self.rhs


@dataclass
class LinSystem:
    """Conjunction of linear constraints over named variables.

    Variables are nonnegative unless listed in ``free``.
    """

    variables: list = field(default_factory=list)
    constraints: list = field(default_factory=list)
    free: set = field(default_factory=set)

    def __post_init__(self):
        self._seen = set(self.variables)

    def var(self, name: Hashable, free: bool = False) -> Hashable:
        if name not in self._seen:
            self.variables.append(name)
            self._seen.add(name)
        if free:
            self.free.add(name)
        return name

    def add(self, coeffs: Mapping, rel: str, rhs=0) -> None:
        coeffs = {v: Fraction(c) for v, c in coeffs.items() if c != 0}
        for v in coeffs:
            self.var(v)
        rhs = Fraction(rhs)
        if rel == GE:
            coeffs, rel, rhs = {v: -c for v, c in coeffs.items()}, LE, -rhs
        elif rel == GT:
            coeffs, rel, rhs = {v: -c for v, c in coeffs.items()}, LT, -rhs
        if rel not in (LE, LT, EQ):
            raise ValueError(f"unknown relation {rel!r}")
        self.constraints.append(LinConstraint(coeffs, rel, rhs))

    def holds(self, assignment: Mapping) -> bool:
        if any(assignment.get(v, 0) < 0 for v in self.variables if v not in self.free):
            return False
        return all(c.holds(assignment) for c in self.constraints)


@dataclass(frozen=True)
class Sat:
    assignment: dict


@dataclass(frozen=True)
class Unsat:
    pass


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    assignment: dict | None = None
    value: Fraction | None = None


class _Tableau:
    """Standard-form tableau: rows . x = rhs, x >= 0, minimise obj . x."""

    def __init__(self, rows, rhs, basis, ncols):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols
        self.banned = set()
        self.obj = None
        self.obj_val = _Q(0)

    def set_objective(self, cost):
        obj = list(cost)
        val = _Q(0)
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                for j in range(self.ncols):
                    if row[j]:
                        obj[j] -= cb * row[j]
                val -= cb * self.rhs[i]
        self.obj = obj
        self.obj_val = val  # negated objective value

    def pivot(self, r, s):
        row = self.rows[r]
        piv = row[s]
        if piv != 1:
            inv = 1 / piv
            for j in range(self.ncols):
                if row[j]:
                    row[j] *= inv
            self.rhs[r] *= inv
        nz = [j for j in range(self.ncols) if row[j]]
        rr = self.rhs[r]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[s]
            if f:
                for j in nz:
                    other[j] -= f * row[j]
                self.rhs[i] -= f * rr
        f = self.obj[s]
        if f:
            for j in nz:
                self.obj[j] -= f * row[j]
            self.obj_val -= f * rr
        self.basis[r] = s

    def run(self) -> str:
        """Bland's rule; returns "optimal" or "unbounded"."""
        while True:
            s = next((j for j in range(self.ncols) if j not in self.banned and self.obj[j] < 0), None)
            if s is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                a = row[s]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], s)

    def values(self):
        x = [_Q(0)] * self.ncols
        for i, b in enumerate(self.basis):
            x[b] = self.rhs[i]
        return x


def _solve_standard(A, b, cost, slack_cols):
    """Minimise cost.x subject to A x = b, x >= 0.

    ``slack_cols[i]`` is a column usable as an initial basic variable for
    row ``i`` (unit column with coefficient +1), or None.
    Returns (status, x, value).
    """
    m = len(A)
    n = len(cost)
    rows, rhs = [], []
    for i in range(m):
        row = [_Q(v) for v in A[i]]
        r = _Q(b[i])
        if r < 0:
            row = [-v for v in row]
            r = -r
            if slack_cols[i] is not None:
                slack_cols = list(slack_cols)
                slack_cols[i] = None
        rows.append(row)
        rhs.append(r)
    basis = []
    art = []
    for i in range(m):
        if slack_cols[i] is not None:
            basis.append(slack_cols[i])
        else:
            col = n + len(art)
            art.append(i)
            basis.append(col)
    ncols = n + len(art)
    for i, row in enumerate(rows):
        row.extend([_Q(0)] * len(art))
    for k, i in enumerate(art):
        rows[i][n + k] = _Q(1)
    tab = _Tableau(rows, rhs, basis, ncols)
    if art:
        tab.set_objective([_Q(0)] * n + [_Q(1)] * len(art))
        tab.run()
        if -tab.obj_val > 0:
            return "infeasible", None, None
        # drive remaining artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= n:
                s = next((j for j in range(n) if tab.rows[i][j]), None)
                if s is None:
                    del tab.rows[i], tab.rhs[i], tab.basis[i]
                    continue
                tab.pivot(i, s)
            i += 1
        tab.banned = set(range(n, ncols))
    tab.set_objective([_Q(c) for c in cost] + [_Q(0)] * len(art))
    status = tab.run()
    if status == "unbounded":
        return "unbounded", None, None
    return "optimal", tab.values()[:n], -tab.obj_val


def _standardize(sys: LinSystem, extra_strict_slack=None):
    """Map a LinSystem to (A, b, slack_cols, colmap) in standard form."""
    cols = []  # (var, sign)
    for v in sys.variables:
        cols.append((v, 1))
        if v in sys.free:
            cols.append((v, -1))
    colpos = {}
    for k, (v, sg) in enumerate(cols):
        colpos.setdefault(v, []).append((k, sg))
    nvar = len(cols)
    slack_rows = [i for i, c in enumerate(sys.constraints) if c.rel in (LE, LT)]
    n = nvar + len(slack_rows)
    A, b, slack_cols = [], [], []
    sidx = {i: nvar + k for k, i in enumerate(slack_rows)}
    for i, c in enumerate(sys.constraints):
        row = [0] * n
        for v, coef in c.coeffs.items():
            for k, sg in colpos[v]:
                row[k] += sg * coef
        if c.rel == LT and extra_strict_slack is not None:
            row[colpos[extra_strict_slack][0][0]] += 1
        if i in sidx:
            row[sidx[i]] = 1
            slack_cols.append(sidx[i])
        else:
            slack_cols.append(None)
        A.append(row)
        b.append(c.rhs)
    return A, b, slack_cols, cols, n


def _assignment(sys, cols, x):
    out = {v: Fraction(0) for v in sys.variables}
    for k, (v, sg) in enumerate(cols):
        out[v] += sg * _frac(x[k])
    return out


def minimize(sys: LinSystem, objective: Mapping) -> LPResult:
    """Minimise a linear objective over a system without strict constraints."""
    if any(c.rel == LT for c in sys.constraints):
        raise ValueError("minimize does not accept strict constraints")
    A, b, slack_cols, cols, n = _standardize(sys)
    cost = [0] * n
    for k, (v, sg) in enumerate(cols):
        cost[k] = sg * Fraction(objective.get(v, 0))
    status, x, val = _solve_standard(A, b, cost, slack_cols)
    if status != "optimal":
        return LPResult(status)
    return LPResult(status, _assignment(sys, cols, x), _frac(val))


def feasible(sys: LinSystem):
    """Decide a finite system exactly; returns :class:`Sat` or :class:`Unsat`.

    Strict constraints share one slack variable ``s`` in ``[0, 1]``
    (``a.x + s <= b``); ``s`` is maximised and the system is strictly
    feasible iff the optimum is positive.
    """
    strict = any(c.rel == LT for c in sys.constraints)
    if not strict:
        A, b, slack_cols, cols, n = _standardize(sys)
        status, x, _ = _solve_standard(A, b, [0] * n, slack_cols)
        if status == "infeasible":
            return Unsat()
        return Sat(_assignment(sys, cols, x))
    aux = LinSystem(list(sys.variables), list(sys.constraints), set(sys.free))
    s = ("__strict_slack__",)
    aux.var(s)
    aux.add({s: 1}, LE, 1)
    A, b, slack_cols, cols, n = _standardize(aux, extra_strict_slack=s)
    cost = [0] * n
    cost[[k for k, (v, _) in enumerate(cols) if v == s][0]] = -1
    status, x, val = _solve_standard(A, b, cost, slack_cols)
    if status == "infeasible" or -_frac(val) <= 0:
        return Unsat()
    out = _assignment(aux, cols, x)
    del out[s]
    return Sat(out)


# ---------------------------------------------------------------------------
# Petri-net systems


def _col(net: PetriNet, t: str) -> tuple:
    return net.delta(t)


def state_equation(net: PetriNet, b, U: Iterable[str], scale: bool = False, force=None) -> LinSystem:
    """{x >= 0 : F x = b, supp(x) within U}; optionally F x = y b with y >= 1 and x_force >= 1."""
    U = net.ordered(U)
    sys = LinSystem()
    for t in U:
        sys.var(("x", t))
    if scale:
        sys.var(("y",))
        sys.add({("y",): 1}, GE, 1)
    for i, _ in enumerate(net.places):
        row = {("x", t): net.delta(t)[i] for t in U}
        if scale:
            row[("y",)] = -Fraction(b[i])
            sys.add(row, EQ, 0)
        else:
            sys.add(row, EQ, b[i])
    if force is not None:
        sys.add({("x", force): 1}, GE, 1)
    return sys


def solve_state_equation(net: PetriNet, b, U: Iterable[str]):
    """A solution x (tuple over all transitions) of F x = b with supp(x) in U, or None."""
    res = feasible(state_equation(net, b, U))
    if isinstance(res, Unsat):
        return None
    return tuple(res.assignment.get(("x", t), Fraction(0)) for t in net.transitions)


def support_witness(net: PetriNet, b, U: Iterable[str]):
    """Return (U', x) with U' the maximal support of solutions of F x = b within U.

    ``x`` solves the state equation with supp(x) = U'. Returns None when no
    solution exists.
    """
    U = net.check_transitions(U)
    x0 = solve_state_equation(net, b, U)
    if x0 is None:
        return None
    sols = [x0]
    covered = {t for t, v in zip(net.transitions, x0) if v > 0}
    for t in net.ordered(U):
        if t in covered:
            continue
        res = feasible(state_equation(net, b, U, scale=True, force=t))
        if isinstance(res, Unsat):
            continue
        y = res.assignment[("y",)]
        x = tuple(res.assignment.get(("x", u), Fraction(0)) / y for u in net.transitions)
        sols.append(x)
        covered |= {u for u, v in zip(net.transitions, x) if v > 0}
    k = len(sols)
    x = tuple(sum(col, Fraction(0)) / k for col in zip(*sols))
    return frozenset(covered), x


def max_support(net: PetriNet, b, U: Iterable[str]) -> frozenset:
    """Largest U' within U that is the support of a solution of F x = b (empty if none)."""
    res = support_witness(net, b, U)
    return frozenset() if res is None else res[0]


@dataclass(frozen=True)
class ExclusionWitness:
    """A vector y over places inducing the linear function f(m) = y . m."""

    y: tuple

    def __call__(self, m) -> Fraction:
        return sum((a * v for a, v in zip(self.y, m)), Fraction(0))

    def growth(self, net: PetriNet, t: str) -> Fraction:
        """(F^T y)_t, the change of f per unit firing of t."""
        return self(net.delta(t))

    def satisfies(self, net: PetriNet, b, S: Iterable[str], U: Iterable[str]) -> bool:
        """Exact re-check of membership in the system Y_S."""
        if any(self.growth(net, t) < 0 for t in U):
            return False
        by = self(b)
        return by <= 0 and by < sum((self.growth(net, s) for s in S), Fraction(0))


def exclusion_system(net: PetriNet, b, S: Iterable[str], U: Iterable[str]) -> LinSystem:
    """Y_S with the strict inequality normalised to slack 1 (the set is a cone)."""
    S, U = net.ordered(S), net.ordered(U)
    sys = LinSystem()
    for p in net.places:
        sys.var(("y+", p))
        sys.var(("y-", p))

    def lin(vec):
        row = {}
        for p, c in zip(net.places, vec):
            if c:
                row[("y+", p)] = row.get(("y+", p), 0) + c
                row[("y-", p)] = row.get(("y-", p), 0) - c
        return row

    for t in U:
        sys.add(lin(net.delta(t)), GE, 0)
    sys.add(lin(b), LE, 0)
    diff = list(b)
    for s in S:
        diff = [d - c for d, c in zip(diff, net.delta(s))]
    sys.add(lin(diff), LE, -1)
    return sys


def solve_exclusion(net: PetriNet, b, S: Iterable[str], U: Iterable[str]):
    """An L1-minimal y in Y_S, or None when Y_S is empty."""
    S = net.check_transitions(S)
    U = net.check_transitions(U)
    if not S <= U:
        raise ValueError("S must be a subset of U")
    sys = exclusion_system(net, b, S, U)
    res = minimize(sys, {v: 1 for v in sys.variables})
    if res.status != "optimal":
        return None
    y = tuple(res.assignment[("y+", p)] - res.assignment[("y-", p)] for p in net.places)
    w = ExclusionWitness(y)
    assert w.satisfies(net, b, S, U)
    return w
