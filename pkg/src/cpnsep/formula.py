"""Homogeneous two-marking linear formulas in disjunctive normal form.

An :class:`Atom` ``(u, v, rel)`` reads ``u.m + v.m' rel 0`` with ``rel`` one
of ``"le"``/``"lt"``. The two-sided form ``a.m ~ b.m'`` corresponds to
``u = a`` and ``v = -b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

LE, LT = "le", "lt"
FWD, BWD = "fwd", "bwd"


class DimensionMismatch(ValueError):
    pass


def _dot(a, m) -> Fraction:
    return sum((x * y for x, y in zip(a, m) if x), Fraction(0))


def _sparse(a) -> tuple:
    # integral coefficients as ints: Fraction * int is much cheaper than Fraction * Fraction
    return tuple((i, int(c) if c.denominator == 1 else c) for i, c in enumerate(a) if c)


def _sparse_dot(terms, m):
    return sum(c * m[i] for i, c in terms)


def _holds(lhs, rel) -> bool:
    return lhs <= 0 if rel == LE else lhs < 0


@dataclass(frozen=True)
class Atom:
    u: tuple
    v: tuple
    rel: str

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(Fraction(c) for c in self.u))
        object.__setattr__(self, "v", tuple(Fraction(c) for c in self.v))
        if self.rel not in (LE, LT):
            raise ValueError(f"atom relation must be 'le' or 'lt', got {self.rel!r}")
        if len(self.u) != len(self.v):
            raise DimensionMismatch("atom sides have different dimensions")

    @classmethod
    def two_sided(cls, a, b, rel: str) -> "Atom":
        """The atom ``a.m rel b.m'``."""
        return cls(tuple(a), tuple(-Fraction(c) for c in b), rel)

    @property
    def dim(self) -> int:
        return len(self.u)

    def evaluate(self, m, m2) -> bool:
        su, sv = _sparse_cached(self)
        return _holds(_sparse_dot(su, m) + _sparse_dot(sv, m2), self.rel)

    def transposed(self) -> "Atom":
        return Atom(self.v, self.u, self.rel)

    def scaled(self, k) -> "Atom":
        return Atom(tuple(k * c for c in self.u), tuple(k * c for c in self.v), self.rel)


def _sparse_cached(atom: Atom):
    hit = atom.__dict__.get("_terms")
    if hit is None:
        hit = (_sparse(atom.u), _sparse(atom.v))
        object.__setattr__(atom, "_terms", hit)
    return hit


@dataclass(frozen=True)
class DnfFormula:
    clauses: tuple  # tuple of tuples of Atom

    def __post_init__(self):
        clauses = tuple(tuple(c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if not clauses or any(not c for c in clauses):
            raise ValueError("a DNF formula needs at least one clause and no empty clause")
        dims = {a.dim for c in clauses for a in c}
        if len(dims) != 1:
            raise DimensionMismatch("atoms range over different place sets")

    @property
    def dim(self) -> int:
        return self.clauses[0][0].dim

    def __len__(self) -> int:
        return len(self.clauses)

    def atoms(self):
        for c in self.clauses:
            yield from c


def eval_clause(clause, m, m2) -> bool:
    return all(a.evaluate(m, m2) for a in clause)


def eval_pair(f: DnfFormula, m, m2) -> bool:
    if len(m) != f.dim or len(m2) != f.dim:
        raise DimensionMismatch(f"formula is over {f.dim} places, markings have {len(m)} and {len(m2)}")
    return any(eval_clause(c, m, m2) for c in f.clauses)


def transpose_formula(f: DnfFormula) -> DnfFormula:
    return DnfFormula(tuple(tuple(a.transposed() for a in c) for c in f.clauses))


# ---------------------------------------------------------------------------
# one-marking formulas


@dataclass(frozen=True)
class LinearAtom:
    """``coeffs.m + const rel 0``."""

    coeffs: tuple
    const: Fraction
    rel: str

    def evaluate(self, m) -> bool:
        terms = self.__dict__.get("_terms")
        if terms is None:
            terms = _sparse(self.coeffs)
            object.__setattr__(self, "_terms", terms)
        return _holds(_sparse_dot(terms, m) + self.const, self.rel)

    @property
    def constant(self) -> bool:
        return not any(self.coeffs)


@dataclass(frozen=True)
class OneSidedFormula:
    clauses: tuple  # tuple of tuples of LinearAtom; an empty clause is true

    def evaluate(self, m) -> bool:
        return any(all(a.evaluate(m) for a in c) for c in self.clauses)

    def simplify(self) -> "OneSidedFormula":
        """Fold constant atoms. For display only; checking never uses this."""
        out = []
        for c in self.clauses:
            kept = []
            for a in c:
                if a.constant:
                    if not a.evaluate(()):
                        break
                    continue
                if a not in kept:
                    kept.append(a)
            else:
                if not kept:
                    return OneSidedFormula(((),))
                if tuple(kept) not in out:
                    out.append(tuple(kept))
        return OneSidedFormula(tuple(out))

    def render(self, places: Sequence[str]) -> str:
        if not self.clauses:
            return "false"
        parts = []
        for c in self.clauses:
            if not c:
                return "true"
            parts.append(" & ".join(_render_linear(a, places) for a in c))
        if len(parts) == 1:
            return parts[0]
        return " | ".join(f"({p})" if len(c) > 1 else p for p, c in zip(parts, self.clauses))


def specialize(f: DnfFormula, endpoint, direction: str) -> OneSidedFormula:
    """Fix one argument: FWD gives m -> f(endpoint, m), BWD gives m -> f(m, endpoint)."""
    if len(endpoint) != f.dim:
        raise DimensionMismatch("endpoint marking does not match the formula")
    clauses = []
    for c in f.clauses:
        atoms = []
        for a in c:
            if direction == FWD:
                atoms.append(LinearAtom(a.v, _dot(a.u, endpoint), a.rel))
            elif direction == BWD:
                atoms.append(LinearAtom(a.u, _dot(a.v, endpoint), a.rel))
            else:
                raise ValueError(f"direction must be {FWD!r} or {BWD!r}")
        clauses.append(tuple(atoms))
    return OneSidedFormula(tuple(clauses))


# ---------------------------------------------------------------------------
# rendering


def _term(c: Fraction, name: str) -> str:
    return name if c == 1 else f"{c}*{name}"


def _side(terms) -> str:
    return " + ".join(_term(c, n) for c, n in terms) if terms else "0"


_SYM = {LE: "<=", LT: "<"}


def _render_linear(a: LinearAtom, places) -> str:
    # positive terms on the left, negated negative terms (and constant) on the right
    left = [(c, f"m({p})") for c, p in zip(a.coeffs, places) if c > 0]
    right = [(-c, f"m({p})") for c, p in zip(a.coeffs, places) if c < 0]
    k = a.const
    lhs = _side(left)
    rhs = _side(right)
    if k > 0:
        lhs = f"{lhs} + {k}" if left else str(k)
    elif k < 0:
        rhs = f"{rhs} + {-k}" if right else str(-k)
    return f"{lhs} {_SYM[a.rel]} {rhs}"


def render_atom(a: Atom, places: Sequence[str]) -> str:
    left = [(c, f"m({p})") for c, p in zip(a.u, places) if c > 0]
    left += [(c, f"m'({p})") for c, p in zip(a.v, places) if c > 0]
    right = [(-c, f"m({p})") for c, p in zip(a.u, places) if c < 0]
    right += [(-c, f"m'({p})") for c, p in zip(a.v, places) if c < 0]
    return f"{_side(left)} {_SYM[a.rel]} {_side(right)}"


def render(f: DnfFormula, places: Sequence[str]) -> str:
    return " |\n".join("[" + " & ".join(render_atom(a, places) for a in c) + "]" for c in f.clauses)
