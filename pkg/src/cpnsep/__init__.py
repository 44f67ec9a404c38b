"""Continuous Petri net reachability, unreachability certificates and their checking."""

from .certify import Certificate, ReachableInput, construct_biseparator
from .check import Accept, Reject, check_certificate
from .formula import BWD, FWD, Atom, DnfFormula, specialize
from .net import PetriNet, fire, replay
from .reach import Reachable, Unreachable, reachable
from .set2set import ConvexPolytope, PolytopeConstraint, compile_query

__all__ = [
    "Accept",
    "Atom",
    "BWD",
    "Certificate",
    "ConvexPolytope",
    "DnfFormula",
    "FWD",
    "PetriNet",
    "PolytopeConstraint",
    "Reachable",
    "ReachableInput",
    "Reject",
    "Unreachable",
    "check_certificate",
    "compile_query",
    "construct_biseparator",
    "fire",
    "reachable",
    "replay",
    "specialize",
]
