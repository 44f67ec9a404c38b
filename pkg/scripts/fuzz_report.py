"""Run the cross-check over several seeds and tabulate the outcome.

    python scripts/fuzz_report.py --spec 6,6,3,4 --count 200 --seeds 0 1 2 --jobs 4
"""

import argparse
import sys
import time

from cpnsep.harness import NetGenSpec, crosscheck


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--spec", default="6,6,3,4")
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0])
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args(argv)

    print(f"{'seed':>6} {'reach':>6} {'unreach':>8} {'walk-hit':>9} {'viol':>5} {'sec':>6}")
    bad = 0
    for seed in args.seeds:
        t0 = time.perf_counter()
        rep = crosscheck(NetGenSpec.parse(args.spec, seed=seed), args.count, jobs=args.jobs)
        dt = time.perf_counter() - t0
        print(f"{seed:>6} {rep.reachable:>6} {rep.unreachable:>8} {rep.walk_hits:>9} {len(rep.violations):>5} {dt:>6.1f}")
        for v in rep.violations:
            print(f"       [{v['label']}] {v['message']}")
        bad += len(rep.violations)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
