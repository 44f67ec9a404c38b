"""Independent oracles shared by the property and acceptance suites."""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from cpnsep.formula import LE, LT, Atom


def endpoint_scan(constraints) -> bool:
    """Brute force for: some lam >= 0 with a*lam rel b for all (a, rel, b).

    Every solution set is an interval whose ends are among 0 and the
    ratios b/a, so it suffices to try those, the midpoints between them and
    one point beyond the largest.
    """
    cands = {Fraction(0)}
    for a, _, b in constraints:
        if a:
            r = Fraction(b) / Fraction(a)
            if r >= 0:
                cands.add(r)
    pts = sorted(cands)
    probes = pts + [(x + y) / 2 for x, y in zip(pts, pts[1:])] + [pts[-1] + 1]

    def ok(lam):
        return all((a * lam <= b) if rel == LE else (a * lam < b) for a, rel, b in constraints)

    return any(ok(lam) for lam in probes)


def random_system(rng: random.Random):
    k = rng.randint(1, 6)
    return [(rng.randint(-5, 5), rng.choice((LE, LT)), rng.randint(-5, 5)) for _ in range(k)]


def random_atom(rng: random.Random, n: int) -> Atom:
    def vec():
        return tuple(rng.choice((0, 0, 0, 1, -1, 2, -2)) for _ in range(n))

    return Atom(vec(), vec(), rng.choice((LE, LT)))


def _vals(gen: np.random.Generator, shape):
    raw = gen.integers(0, 9, size=shape)
    keep = gen.random(shape) < 0.55
    return np.where(keep, raw, 0)


def _atom_holds(atom: Atom, m, m2):
    u = np.array([int(c) for c in atom.u], dtype=np.int64)
    v = np.array([int(c) for c in atom.v], dtype=np.int64)
    lhs = m @ u + m2 @ v
    return lhs <= 0 if atom.rel == LE else lhs < 0


def implication_counterexample_by_sampling(net, psi: Atom, t: str, psi2: Atom, want=1000, seed=0, cap=200_000):
    """Search sampled (m, m') |= psi with m' >= alpha pre(t), alpha in {1/2, 1, 2}.

    Markings are doubled so every quantity stays integral. Returns
    ``(found, accepted, tried)``: a violating point (or None), the number of
    admissible samples checked and the number of raw draws.
    """
    gen = np.random.default_rng(seed)
    n = len(net.places)
    pre = np.array(net.pre(t), dtype=np.int64)
    delta = np.array(net.delta(t), dtype=np.int64)
    accepted = 0
    tried = 0
    while accepted < want and tried < cap:
        batch = 4096
        tried += batch
        alpha2 = gen.choice(np.array([1, 2, 4]), size=batch)  # 2 * alpha
        m = _vals(gen, (batch, n))
        m2 = alpha2[:, None] * pre[None, :] + _vals(gen, (batch, n))
        good = _atom_holds(psi, m, m2)
        m, m2, alpha2 = m[good], m2[good], alpha2[good]
        take = min(len(m), want - accepted)
        m, m2, alpha2 = m[:take], m2[:take], alpha2[:take]
        accepted += take
        m3 = m2 + alpha2[:, None] * delta[None, :]
        bad = ~_atom_holds(psi2, m, m3)
        if bad.any():
            k = int(np.argmax(bad))
            return (tuple(Fraction(int(x), 2) for x in m[k]), tuple(Fraction(int(x), 2) for x in m2[k]),
                    Fraction(int(alpha2[k]), 2)), accepted, tried
    return None, accepted, tried


def sample_markings(rng: random.Random, n: int, count: int):
    pool = [Fraction(0), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)]
    out = []
    for _ in range(count):
        out.append(tuple(rng.choice(pool) if rng.random() < 0.8 else Fraction(rng.randint(0, 20), rng.randint(1, 7))
                         for _ in range(n)))
    return out
