"""Look for digraphs whose dicuts all have >= tau arcs but whose arcs do not
split into a k-dijoin and a (tau-k)-dijoin, by exhaustive search per digraph.

    python3 scripts/conjecture_search.py --tau 4 --n 6 --trials 200 --seed 1
"""

import argparse
import time

from subflow.graph import edge_connectivity_underlying
from subflow.oracles import conjecture_search


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--tau", type=int, default=4)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-arcs", type=int, default=16)
    args = p.parse_args()

    start = time.perf_counter()
    checked, hits = conjecture_search(args.tau, args.n, args.trials, args.seed, args.max_arcs)
    print(f"tau={args.tau} n={args.n} seed={args.seed}: {checked} digraphs, "
          f"{len(hits)} without a split, {time.perf_counter() - start:.1f}s")
    for hit in hits:
        ec = edge_connectivity_underlying(hit.d)
        print(f"  k={hit.k} underlying ec={ec} arcs={list(hit.d.arcs)}")


if __name__ == "__main__":
    main()
