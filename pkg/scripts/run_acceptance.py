"""Run every acceptance experiment and print one PASS/FAIL line each.

    python3 scripts/run_acceptance.py            # full sizes
    python3 scripts/run_acceptance.py --skip-scan  # without the long transshipment scan
"""

import argparse
import sys

from subflow import experiments


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--skip-scan", action="store_true", help="skip the exhaustive transshipment scan")
    args = p.parse_args()

    results = []
    flips = []
    for name, run in experiments.ALL:
        if args.skip_scan and run is experiments.run_transshipment_scan:
            print(f"SKIP {name}")
            continue
        out = run()
        flips += out.flips
        results.append(out)
        print(out.line(), flush=True)
        if run is experiments.run_weak_orientation:
            closure = experiments.run_flip_closure(flips)
            results.append(closure)
            print(closure.line(), flush=True)
    failed = [r for r in results if not r.passed]
    for r in failed:
        for msg in r.failures[:5]:
            print(f"  {r.name}: {msg}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
