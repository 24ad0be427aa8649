"""Small matroids given by rank tables, and a catalogue of tiny examples."""

from dataclasses import dataclass, field
from itertools import combinations

from .errors import CapacityError, InputError

RANK_CHECK_CAP = 12


@dataclass(frozen=True)
class MatroidOracle:
    m: int
    ranks: tuple  # rank of every subset, indexed by bitmask
    tag: str = field(default="matroid", compare=False)

    def __post_init__(self):
        if len(self.ranks) != 1 << self.m:
            raise InputError("rank table must cover every subset")
        if self.m > RANK_CHECK_CAP:
            raise CapacityError(f"ground size {self.m} exceeds {RANK_CHECK_CAP}")
        r = self.ranks
        if r[0] != 0:
            raise InputError("rank of the empty set must be 0")
        for X in range(1 << self.m):
            for e in range(self.m):
                if not X >> e & 1:
                    step = r[X | 1 << e] - r[X]
                    if step not in (0, 1):
                        raise InputError(f"{self.tag}: rank jumps by {step}")
        for X in range(1 << self.m):
            for e in range(self.m):
                for f in range(e + 1, self.m):
                    if X >> e & 1 or X >> f & 1:
                        continue
                    a, b = X | 1 << e, X | 1 << f
                    if r[a] + r[b] < r[a | b] + r[X]:
                        raise InputError(f"{self.tag}: rank function not submodular")

    def __call__(self, X):
        return self.ranks[X]

    @property
    def rank(self):
        return self.ranks[-1]

    def is_basis(self, B):
        return bin(B).count("1") == self.rank and self.ranks[B] == self.rank


def from_independent(m, indep, tag):
    """Rank table from an independence predicate on bitmasks."""
    ranks = []
    for X in range(1 << m):
        elems = [e for e in range(m) if X >> e & 1]
        best = 0
        for size in range(len(elems), 0, -1):
            if any(indep(sum(1 << e for e in S)) for S in combinations(elems, size)):
                best = size
                break
        ranks.append(best)
    return MatroidOracle(m, tuple(ranks), tag)


def uniform(r, m):
    return MatroidOracle(m, tuple(min(bin(X).count("1"), r) for X in range(1 << m)), f"U{r},{m}")


def partition(parts, caps=None, m=None):
    """Partition matroid: at most ``caps[i]`` elements from ``parts[i]``."""
    parts = [tuple(p) for p in parts]
    caps = [1] * len(parts) if caps is None else list(caps)
    m = sum(len(p) for p in parts) if m is None else m
    masks = [sum(1 << e for e in p) for p in parts]
    ranks = tuple(sum(min(bin(X & P).count("1"), c) for P, c in zip(masks, caps))
                  for X in range(1 << m))
    tag = "partition" + "|".join("".join(map(str, p)) for p in parts)
    if any(c != 1 for c in caps):
        tag += ":" + "".join(map(str, caps))
    return MatroidOracle(m, ranks, tag)


def graphic(num_vertices, edges):
    """Cycle matroid of a multigraph; elements are edge positions."""
    edges = [tuple(e) for e in edges]

    def forest(X):
        parent = list(range(num_vertices))

        def find(v):
            while parent[v] != v:
                v = parent[v]
            return v

        for i, (u, v) in enumerate(edges):
            if X >> i & 1:
                ru, rv = find(u), find(v)
                if ru == rv:
                    return False
                parent[ru] = rv
        return True

    return from_independent(len(edges), forest, "graphic" + "".join(f"{u}{v}" for u, v in edges))


def common_bases(ms):
    """Every common basis (bitmask) of matroids on one ground set."""
    m = ms[0].m
    r = ms[0].rank
    if any(M.m != m or M.rank != r for M in ms):
        return []
    out = []
    for S in combinations(range(m), r):
        B = sum(1 << e for e in S)
        if all(M.is_basis(B) for M in ms):
            out.append(B)
    return out


def catalogue():
    """Named tiny matroids: uniform (m <= 5), partition, graphic (<= 4 edges)."""
    cat = {}
    for m in range(1, 6):
        for r in range(0, m + 1):
            cat[f"U{r},{m}"] = uniform(r, m)
    for parts in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)),
                  ((0,), (1, 2)), ((0, 1), (2,)), ((0, 1, 2), (3,)), ((0,), (1, 2, 3))):
        M = partition(parts)
        cat[M.tag] = M
    for parts, caps in ((((0, 1, 2), (3,)), (2, 1)), (((0, 1), (2, 3)), (2, 1)),
                        (((0, 1), (2, 3)), (1, 2))):
        M = partition(parts, caps)
        cat[M.tag] = M
    for nv, edges in ((3, ((0, 1), (1, 2), (0, 2))),
                      (3, ((0, 1), (0, 1), (1, 2))),
                      (4, ((0, 1), (1, 2), (2, 3), (0, 3))),
                      (3, ((0, 1), (1, 2), (0, 2), (0, 1))),
                      (4, ((0, 1), (1, 2), (2, 3), (0, 2)))):
        M = graphic(nv, edges)
        cat[M.tag] = M
    return cat


def catalogue_triples(max_m=5):
    """Every ordered triple from the catalogue on a common ground set and
    rank whose first member satisfies the reduction's preconditions."""
    cat = catalogue()
    by_shape = {}
    for name in sorted(cat):
        M = cat[name]
        if M.m <= max_m:
            by_shape.setdefault((M.m, M.rank), []).append(name)
    triples = []
    for (m, r), names in sorted(by_shape.items()):
        if r == 0:
            continue
        for a in names:
            if not reduction_ready(cat[a]):
                continue
            for b in names:
                for c in names:
                    triples.append((a, b, c))
    return cat, triples


def reduction_ready(M):
    """No loops (singletons have rank 1) and no coloops (co-singletons keep
    full rank)."""
    full = (1 << M.m) - 1
    return all(M(1 << u) == 1 and M(full & ~(1 << u)) == M.rank for u in range(M.m))
