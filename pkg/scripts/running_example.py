"""Walk through the four-place example: replay, decide, certify, check, separate.

    python scripts/running_example.py
"""

from cpnsep.certify import construct_biseparator
from cpnsep.check import check_certificate
from cpnsep.fixtures import MSRC, MTGT3, MTGT4, SIGMA, n1
from cpnsep.formula import BWD, FWD, render, specialize
from cpnsep.net import replay
from cpnsep.reach import reachable


def show(m):
    return "(" + ", ".join(str(v) for v in m) + ")"


def main():
    net = n1()
    print("replay of the sample run ends at", show(replay(net, MSRC, SIGMA)))

    for name, tgt in (("mtgt4", MTGT4), ("mtgt3", MTGT3)):
        res = reachable(net, MSRC, tgt)
        print(f"msrc -> {name}: {'reachable' if res.reachable else 'unreachable'}")
        if res.reachable:
            print("  firing order", " ".join(res.witness.fwd_order))

    cert = construct_biseparator(net, net.transitions, MSRC, MTGT3)
    print(f"\ncertificate ({len(cert.formula)} clauses):")
    for line in render(cert.formula, net.places).splitlines():
        print("  " + line)
    verdict = check_certificate(net, cert)
    print("checker:", "accept" if verdict.accepted else verdict.triple())
    print("forward separator: ", specialize(cert.formula, MSRC, FWD).simplify().render(net.places))
    print("backward separator:", specialize(cert.formula, MTGT3, BWD).simplify().render(net.places))


if __name__ == "__main__":
    main()
