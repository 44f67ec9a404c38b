"""Random instances and the end-to-end cross-check behind the fuzz suites.

Every instance is generated from ``random.Random(f"{seed}/{index}")``
(Mersenne Twister, string seeding is stable across platforms), so any
reported violation can be replayed from ``(spec, seed, index)`` alone.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .certify import ReachableInput, construct_biseparator
from .check import check_certificate
from .fixtures import MSRC, MTGT3, MTGT4, n1
from .formula import FWD, specialize
from .net import Marking, PetriNet, enabled, fire
from .reach import reachable, validate_witness


@dataclass(frozen=True)
class NetGenSpec:
    max_places: int = 4
    max_transitions: int = 4
    max_arc_weight: int = 2
    max_denominator: int = 2
    seed: int = 0
    max_token: int = 2
    arc_density: float = 0.35
    walk_target: float = 0.5  # share of targets drawn by a random walk from the source

    def __post_init__(self):
        for name in ("max_places", "max_transitions", "max_arc_weight", "max_denominator", "max_token"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "NetGenSpec":
        """``"P,T,W,D"`` as used on the command line."""
        parts = [int(s) for s in text.split(",")]
        if len(parts) != 4:
            raise ValueError("spec must be P,T,W,D")
        return cls(*parts, seed=seed)


def _rand_marking(rng: random.Random, n: int, spec: NetGenSpec) -> Marking:
    out = []
    for _ in range(n):
        if rng.random() < 0.4:
            out.append(Fraction(0))
        else:
            d = rng.randint(1, spec.max_denominator)
            out.append(Fraction(rng.randint(0, spec.max_token * d), d))
    return tuple(out)


def random_net(spec: NetGenSpec, index: int = 0):
    """A pseudo-random (net, msrc, mtgt) within the bounds of ``spec``."""
    rng = random.Random(f"{spec.seed}/{index}")
    n = rng.randint(1, spec.max_places)
    k = rng.randint(1, spec.max_transitions)

    def weight():
        return rng.randint(1, spec.max_arc_weight) if rng.random() < spec.arc_density else 0

    fm = [[weight() for _ in range(k)] for _ in range(n)]
    fp = [[weight() for _ in range(k)] for _ in range(n)]
    net = PetriNet(tuple(f"p{i + 1}" for i in range(n)), tuple(f"t{j + 1}" for j in range(k)), fm, fp)
    msrc = _rand_marking(rng, n, spec)
    if rng.random() < spec.walk_target:
        walk = sample_run(net, msrc, rng.randint(1, 6), rng.getrandbits(32))
        mtgt = walk[-1]
    else:
        mtgt = _rand_marking(rng, n, spec)
    return net, msrc, mtgt


_ALPHAS = (Fraction(1, 4), Fraction(1, 2), Fraction(1))


def sample_run(net: PetriNet, m: Marking, depth: int, seed) -> list:
    """Random walk of at most ``depth`` firings; returns every visited marking."""
    rng = random.Random(seed)
    m = tuple(Fraction(v) for v in m)
    seen = [m]
    for _ in range(depth):
        live = [t for t in net.transitions if enabled(net, m, t)]
        if not live:
            break
        t = rng.choice(live)
        alpha = rng.choice(_ALPHAS)
        room = min((v / w for v, w in zip(m, net.pre(t)) if w), default=None)
        while room is not None and alpha > room:
            alpha /= 2
        m = fire(net, m, alpha, t)
        seen.append(m)
    return seen


@dataclass
class InstanceResult:
    index: int
    label: str
    verdict: str  # "reachable" or "unreachable"
    clauses: int = 0
    walk_hit: bool = False
    violations: list = field(default_factory=list)


def check_instance(net: PetriNet, msrc: Marking, mtgt: Marking, index: int, label: str, walks: int = 20):
    res = reachable(net, msrc, mtgt)
    if res.reachable:
        out = InstanceResult(index, label, "reachable")
        if not validate_witness(net, msrc, mtgt, res.witness):
            out.violations.append("positive witness does not validate")
        hit = any(mtgt in sample_run(net, msrc, 8, f"{label}/walk/{k}") for k in range(walks))
        out.walk_hit = hit
        return out
    out = InstanceResult(index, label, "unreachable")
    try:
        cert = construct_biseparator(net, net.transitions, msrc, mtgt, annotate=False)
    except (ReachableInput, AssertionError) as e:
        out.violations.append(f"certification failed: {e}")
        return out
    out.clauses = len(cert.formula)
    if not cert.size_ok():
        out.violations.append(f"size bound exceeded: {len(cert.formula)} clauses for |U| = {len(cert.U)}")
    verdict = check_certificate(net, cert)
    if not verdict.accepted:
        out.violations.append(f"certificate rejected: {verdict.triple()}")
        return out
    sep = specialize(cert.formula, msrc, FWD)
    if sep.evaluate(mtgt):
        out.violations.append("forward separator holds at the target")
    for k in range(walks):
        for m in sample_run(net, msrc, 8, f"{label}/walk/{k}"):
            if not sep.evaluate(m):
                out.violations.append(f"forward separator fails on reachable marking {m}")
                return out
    return out


def _job(args):
    spec, index = args
    net, msrc, mtgt = random_net(spec, index)
    return check_instance(net, msrc, mtgt, index, f"{spec.seed}/{index}")


def pinned_cases() -> list:
    net = n1()
    return [("n1:msrc->mtgt3", net, MSRC, MTGT3, "unreachable"), ("n1:msrc->mtgt4", net, MSRC, MTGT4, "reachable")]


@dataclass
class Report:
    spec: dict
    count: int
    reachable: int
    unreachable: int
    walk_hits: int
    violations: list  # dicts with index, label, message

    @property
    def ok(self) -> bool:
        return not self.violations

    def text(self) -> str:
        lines = [
            f"instances: {self.count}",
            f"reachable: {self.reachable} (confirmed by random walk: {self.walk_hits})",
            f"unreachable: {self.unreachable}",
            f"violations: {len(self.violations)}",
        ]
        lines += [f"  [{v['label']}] {v['message']}" for v in self.violations]
        return "\n".join(lines) + "\n"

    def json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"


def crosscheck(spec: NetGenSpec, count: int, jobs: int = 1, pinned: bool = True) -> Report:
    """Run the decision procedure on ``count`` random instances and verify each verdict."""
    tasks = [(spec, i) for i in range(count)]
    if jobs > 1 and count > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_job, tasks, chunksize=max(1, count // (4 * jobs))))
    else:
        results = [_job(t) for t in tasks]
    if pinned:
        for k, (label, net, msrc, mtgt, expected) in enumerate(pinned_cases()):
            r = check_instance(net, msrc, mtgt, -1 - k, label)
            if r.verdict != expected:
                r.violations.append(f"expected {expected}, got {r.verdict}")
            results.append(r)
    violations = [
        {"index": r.index, "label": r.label, "message": msg} for r in results for msg in r.violations
    ]
    return Report(
        spec=asdict(spec),
        count=len(results),
        reachable=sum(r.verdict == "reachable" for r in results),
        unreachable=sum(r.verdict == "unreachable" for r in results),
        walk_hits=sum(r.walk_hit for r in results),
        violations=violations,
    )
