"""Text formats: nets with named markings, polytopes and certificates.

All writers are canonical (fixed order, reduced rationals, ``\\n`` line
ends), so ``parse(write(x)) == x`` and equal objects serialise to equal
bytes.
"""

from __future__ import annotations

import hashlib
import json
import re
from fractions import Fraction
from pathlib import Path

from .certify import Certificate
from .formula import BWD, FWD, LE, LT, Atom, DnfFormula
from .linear import EQ, GE, GT
from .net import PetriNet
from .set2set import ConvexPolytope, PolytopeConstraint

CERT_VERSION = 1


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class NetSyntaxError(ParseError):
    pass


class UnknownId(ParseError):
    pass


class DuplicateId(ParseError):
    pass


class NegativeValue(ParseError):
    pass


class NonCanonicalRational(ParseError):
    pass


class CertificateFormatError(ParseError):
    pass


_RAT = re.compile(r"(-?)(0|[1-9][0-9]*)(?:/([1-9][0-9]*))?")


def parse_rat(text: str, line: int | None = None) -> Fraction:
    """Parse a canonical rational: ``n`` or ``n/d`` with d > 1 and gcd(n, d) = 1."""
    mt = _RAT.fullmatch(text)
    if not mt:
        if re.fullmatch(r"-?[0-9]+(/[0-9]+)?", text):
            raise NonCanonicalRational(f"{text!r} is not in canonical form", line)
        raise NetSyntaxError(f"expected a rational, got {text!r}", line)
    sign, num, den = mt.groups()
    q = Fraction(int(num), int(den) if den else 1)
    if sign and q == 0:
        raise NonCanonicalRational(f"{text!r} is not in canonical form", line)
    if den is not None and (q.denominator != int(den) or int(den) == 1):
        raise NonCanonicalRational(f"{text!r} is not in lowest terms", line)
    return -q if sign else q


def fmt_rat(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _pairs(tokens, line, known, what):
    out = {}
    for tok in tokens:
        name, sep, val = tok.partition(":")
        if not sep or not name or not val:
            raise NetSyntaxError(f"expected name:value, got {tok!r}", line)
        if name not in known:
            raise UnknownId(f"unknown {what} {name!r}", line)
        if name in out:
            raise DuplicateId(f"{what} {name!r} listed twice", line)
        out[name] = parse_rat(val, line)
    return out


def _check_ids(ids, line):
    for name in ids:
        if ":" in name:
            raise NetSyntaxError(f"identifier {name!r} may not contain ':'", line)


def _content_lines(text: str):
    for k, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].split()
        if body:
            yield k, body


# ---------------------------------------------------------------------------
# nets


def parse_net(text: str):
    """Parse a net file; returns ``(net, {name: marking})``."""
    places = None
    arcs = {}
    markings = {}
    current = None
    for k, toks in _content_lines(text):
        key, rest = toks[0], toks[1:]
        if key == "places":
            if places is not None:
                raise NetSyntaxError("places declared twice", k)
            if not rest:
                raise NetSyntaxError("a net needs at least one place", k)
            if len(set(rest)) != len(rest):
                raise DuplicateId("duplicate place id", k)
            _check_ids(rest, k)
            places = rest
            continue
        if places is None:
            raise NetSyntaxError("the first line must declare places", k)
        if key == "transition":
            if len(rest) != 1:
                raise NetSyntaxError("expected 'transition <id>'", k)
            t = rest[0]
            _check_ids(rest, k)
            if t in arcs or t in places:
                raise DuplicateId(f"id {t!r} already used", k)
            arcs[t] = ({}, {})
            current = t
        elif key in ("in", "out"):
            if current is None:
                raise NetSyntaxError(f"'{key}' outside a transition block", k)
            side = arcs[current][0 if key == "in" else 1]
            for p, w in _pairs(rest, k, places, "place").items():
                if w < 0:
                    raise NegativeValue(f"negative weight on {p}", k)
                if w.denominator != 1:
                    raise NetSyntaxError(f"weight on {p} must be a natural number", k)
                if p in side:
                    raise DuplicateId(f"arc {key} {p} given twice for {current}", k)
                side[p] = int(w)
        elif key == "marking":
            if not rest:
                raise NetSyntaxError("expected 'marking <name> p:v ...'", k)
            name = rest[0]
            if name in markings:
                raise DuplicateId(f"marking {name!r} defined twice", k)
            vals = _pairs(rest[1:], k, places, "place")
            for p, v in vals.items():
                if v < 0:
                    raise NegativeValue(f"negative value on {p}", k)
            markings[name] = vals
            current = None
        else:
            raise NetSyntaxError(f"unknown keyword {key!r}", k)
    if places is None:
        raise NetSyntaxError("empty net file")
    net = PetriNet.from_arcs(places, arcs)
    return net, {name: net.marking(vals) for name, vals in markings.items()}


def _arc_list(places, vec) -> str:
    return " ".join(f"{p}:{w}" for p, w in zip(places, vec) if w)


def write_net(net: PetriNet, markings: dict | None = None) -> str:
    lines = ["places " + " ".join(net.places)]
    for t in net.transitions:
        lines.append("")
        lines.append(f"transition {t}")
        pre, post = _arc_list(net.places, net.pre(t)), _arc_list(net.places, net.post(t))
        if pre:
            lines.append(f"in {pre}")
        if post:
            lines.append(f"out {post}")
    if markings:
        lines.append("")
        for name, m in markings.items():
            vals = " ".join(f"{p}:{fmt_rat(v)}" for p, v in zip(net.places, m) if v)
            lines.append(f"marking {name} {vals}".rstrip())
    return "\n".join(lines) + "\n"


def net_hash(net: PetriNet) -> str:
    return hashlib.sha256(write_net(net).encode()).hexdigest()


def read_net(path):
    return parse_net(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# polytopes

_REL = {"<=": LE, "<": LT, ">=": GE, ">": GT, "=": EQ}


def parse_polytope(text: str, places) -> ConvexPolytope:
    """Lines ``p1:1 p3:-1/2 >= 3`` (conjunction) or ``point p1:2 ...``."""
    places = list(places)
    cons = []
    for k, toks in _content_lines(text):
        if toks[0] == "point":
            vals = _pairs(toks[1:], k, places, "place")
            if any(v < 0 for v in vals.values()):
                raise NegativeValue("a point must be a marking", k)
            cons.extend(ConvexPolytope.point([vals.get(p, 0) for p in places]).constraints)
            continue
        if len(toks) < 2 or toks[-2] not in _REL:
            raise NetSyntaxError("expected '<terms> <rel> <rational>'", k)
        coeffs = _pairs(toks[:-2], k, places, "place")
        cons.append(PolytopeConstraint([coeffs.get(p, 0) for p in places], _REL[toks[-2]], parse_rat(toks[-1], k)))
    if not cons:
        raise NetSyntaxError("a polytope needs at least one constraint")
    return ConvexPolytope(tuple(cons))


def read_polytope(path, places) -> ConvexPolytope:
    return parse_polytope(Path(path).read_text(encoding="utf-8"), places)


# ---------------------------------------------------------------------------
# certificates


def _vec(places, vec) -> dict:
    return {p: fmt_rat(c) for p, c in zip(places, vec) if c}


def certificate_to_json(net: PetriNet, cert: Certificate) -> str:
    places = list(net.places)
    order = {t: k for k, t in enumerate(net.transitions)}
    ann = sorted(cert.annotations.items(), key=lambda kv: (kv[0][2] != FWD, order[kv[0][1]], kv[0][0]))
    doc = {
        "version": CERT_VERSION,
        "net_hash": net_hash(net),
        "places": places,
        "u": net.ordered(cert.U),
        "source": {p: fmt_rat(v) for p, v in zip(places, cert.msrc)},
        "target": {p: fmt_rat(v) for p, v in zip(places, cert.mtgt)},
        "clauses": [
            [{"u": _vec(places, a.u), "v": _vec(places, a.v), "rel": a.rel} for a in c] for c in cert.formula.clauses
        ],
        "annotations": [{"dir": d, "t": t, "from": i, "to": j} for (i, t, d), j in ann],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _need(doc, key, kind):
    if key not in doc or not isinstance(doc[key], kind):
        raise CertificateFormatError(f"field {key!r} missing or malformed")
    return doc[key]


def _rat_field(s) -> Fraction:
    if not isinstance(s, str):
        raise CertificateFormatError(f"rationals are strings, got {s!r}")
    try:
        return parse_rat(s)
    except ParseError as e:
        raise CertificateFormatError(str(e)) from None


def _rat_vec(obj, places) -> tuple:
    if not isinstance(obj, dict):
        raise CertificateFormatError("expected a place -> rational object")
    unknown = set(obj) - set(places)
    if unknown:
        raise CertificateFormatError(f"unknown places {sorted(unknown)}")
    return tuple(_rat_field(obj[p]) if p in obj else Fraction(0) for p in places)


def certificate_from_json(text: str):
    """Parse a certificate file; returns ``(certificate, places, net_hash)``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise CertificateFormatError(f"invalid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise CertificateFormatError("a certificate is a JSON object")
    if doc.get("version") != CERT_VERSION:
        raise CertificateFormatError(f"unsupported version {doc.get('version')!r}")
    places = _need(doc, "places", list)
    if not places or not all(isinstance(p, str) for p in places) or len(set(places)) != len(places):
        raise CertificateFormatError("malformed place list")
    U = _need(doc, "u", list)
    if not all(isinstance(t, str) for t in U):
        raise CertificateFormatError("malformed transition list")
    msrc = _rat_vec(_need(doc, "source", dict), places)
    mtgt = _rat_vec(_need(doc, "target", dict), places)
    clauses = []
    for c in _need(doc, "clauses", list):
        if not isinstance(c, list) or not c:
            raise CertificateFormatError("clauses are nonempty lists of atoms")
        atoms = []
        for a in c:
            if not isinstance(a, dict) or a.get("rel") not in (LE, LT):
                raise CertificateFormatError("malformed atom")
            atoms.append(Atom(_rat_vec(a.get("u", {}), places), _rat_vec(a.get("v", {}), places), a["rel"]))
        clauses.append(tuple(atoms))
    if not clauses:
        raise CertificateFormatError("a certificate needs at least one clause")
    ann = {}
    for a in doc.get("annotations", []):
        try:
            d, t, i, j = a["dir"], a["t"], a["from"], a["to"]
        except (KeyError, TypeError):
            raise CertificateFormatError("malformed annotation") from None
        if d not in (FWD, BWD) or not isinstance(i, int) or not isinstance(j, int):
            raise CertificateFormatError("malformed annotation")
        if not (0 <= i < len(clauses) and 0 <= j < len(clauses)):
            raise CertificateFormatError(f"annotation index out of range: {i} -> {j}")
        ann[(i, t, d)] = j
    cert = Certificate(DnfFormula(tuple(clauses)), frozenset(U), msrc, mtgt, ann)
    return cert, tuple(places), doc.get("net_hash")
