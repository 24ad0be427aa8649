"""Seeded random instances: digraphs, crossing families, submodular tables."""

import random
from fractions import Fraction
from math import ceil

from .errors import InputError
from .graph import Digraph, cut_degrees, edge_connectivity_underlying, full_mask, proper_subsets
from .setfam import ExplicitFamily, crossing_closure, table_oracle

# -- digraphs -----------------------------------------------------------------------


def cycle(n):
    if n < 2:
        raise InputError("a cycle needs at least 2 vertices")
    return Digraph(n, tuple((v, (v + 1) % n) for v in range(n)))


def bidirected(n):
    """Complete digraph with both orientations of every pair."""
    return Digraph(n, tuple((u, v) for u in range(n) for v in range(n) if u != v))


def random_digraph(n, m, rng):
    if n < 2:
        raise InputError("need at least 2 vertices for arcs")
    arcs = []
    for _ in range(m):
        t, h = rng.sample(range(n), 2)
        arcs.append((t, h))
    return Digraph(n, tuple(arcs))


def random_weakly_connected(n, extra, rng):
    """Random spanning tree plus ``extra`` random arcs, random orientations."""
    arcs = []
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        arcs.append((u, v) if rng.random() < 0.5 else (v, u))
    d = Digraph(n, tuple(arcs))
    if extra:
        more = random_digraph(n, extra, rng).arcs
        d = Digraph(n, d.arcs + more)
    return d


def random_ec(n, target, rng, simple=True, max_arcs=None):
    """Random orientation of a graph whose edge connectivity is >= target.

    Simple graphs cap the connectivity at ``n - 1``; impossible targets are
    rejected with an input error rather than looping.
    """
    if n < 2:
        raise InputError("edge connectivity needs at least 2 vertices")
    if simple and target > n - 1:
        raise InputError(f"a simple graph on {n} vertices is at most {n - 1}-edge-connected")
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng.shuffle(pairs)
    arcs = []
    used = set()
    limit = max_arcs if max_arcs is not None else 10 * n * max(target, 1)
    while True:
        d = Digraph(n, tuple(arcs))
        if arcs and edge_connectivity_underlying(d) >= target:
            return d
        if len(arcs) >= limit:
            raise InputError(f"could not reach edge connectivity {target} within {limit} arcs")
        if simple:
            u, v = next(p for p in pairs if p not in used)
            used.add((u, v))
        else:
            u, v = rng.sample(range(n), 2)
        arcs.append((u, v) if rng.random() < 0.5 else (v, u))


def _hyp_lhs(d, U, tau, k):
    dout, din = cut_degrees(d, U)
    return dout + (Fraction(tau, k) - 1) * din


def hypothesis_digraph(n, tau, k, rng, max_arcs=16, start=None, attempts=50):
    """Random digraph with ``d^+(U) + (tau/k - 1) d^-(U) >= tau`` everywhere.

    Starts from a few random arcs and keeps adding an arc across a violated
    cut until the inequality holds; gives up after ``max_arcs``.
    """
    for _ in range(attempts):
        m0 = rng.randint(0, n) if start is None else start
        arcs = list(random_digraph(n, m0, rng).arcs) if m0 else []
        while len(arcs) <= max_arcs:
            d = Digraph(n, tuple(arcs))
            bad = [U for U in proper_subsets(n) if _hyp_lhs(d, U, tau, k) < tau]
            if not bad:
                return d
            U = rng.choice(bad)
            inside = [v for v in range(n) if U >> v & 1]
            outside = [v for v in range(n) if not U >> v & 1]
            u, v = rng.choice(inside), rng.choice(outside)
            arcs.append((u, v) if rng.random() < 0.5 else (v, u))
    raise InputError(f"no hypothesis digraph with <= {max_arcs} arcs found")


def min_dicut_digraph(n, tau, rng, max_arcs=20, attempts=50):
    """Random digraph in which every dicut has at least ``tau`` arcs."""
    for _ in range(attempts):
        arcs = list(random_digraph(n, rng.randint(n - 1, 2 * n), rng).arcs)
        while len(arcs) <= max_arcs:
            d = Digraph(n, tuple(arcs))
            bad = []
            for U in proper_subsets(n):
                dout, din = cut_degrees(d, U)
                if din == 0 and dout < tau:
                    bad.append(U)
            if not bad:
                return d
            U = rng.choice(bad)
            inside = [v for v in range(n) if U >> v & 1]
            outside = [v for v in range(n) if not U >> v & 1]
            # only arcs leaving U keep U a dicut; mix both so cuts also close up
            u, v = rng.choice(inside), rng.choice(outside)
            arcs.append((u, v) if rng.random() < 0.7 else (v, u))
    raise InputError(f"no digraph with dicuts >= {tau} within {max_arcs} arcs")


# -- families and functions ---------------------------------------------------------

def random_crossing_family(n, rng, seeds=3, closure_cap=None):
    sets = [rng.randrange(1, full_mask(n)) for _ in range(seeds)]
    fam = crossing_closure(sets, n)
    if closure_cap is not None and len(fam.sets) > closure_cap:
        fam = ExplicitFamily(n, fam.sets[:0], tag="empty")
    return fam


def random_submodular_seed(n, rng, scale=2):
    """Integer submodular function on all subsets: a random directed cut
    function, a modular part and a concave function of cardinality."""
    arcs = [tuple(rng.sample(range(n), 2)) for _ in range(rng.randint(0, 2 * n))] if n > 1 else []
    weights = [rng.randint(1, scale) for _ in arcs]
    mod = [rng.randint(-scale, scale) for _ in range(n)]
    cap = rng.randint(1, max(n, 1))
    conc = rng.randint(0, scale)

    def g(U):
        total = 0
        for (t, h), w in zip(arcs, weights):
            if U >> t & 1 and not U >> h & 1:
                total += w
        size = bin(U).count("1")
        return total + sum(mod[v] for v in range(n) if U >> v & 1) + conc * min(size, cap)

    return g


def random_oracle(family, rng, shift=None, scale=2, tag="random"):
    """Restriction of a random submodular seed to ``family`` plus a shift."""
    g = random_submodular_seed(family.n, rng, scale)
    s = rng.randint(-scale, scale) if shift is None else shift
    return table_oracle(family, {U: g(U) + s for U in family.members()}, tag)


def lifted_oracle(d, family, tau, k, rng, scale=2):
    """Random crossing submodular ``f`` on ``family`` with
    ``f(U) >= (k/tau)(d^+ - d^-)``, tight somewhere when possible."""
    g = random_submodular_seed(d.n, rng, scale)
    p = rng.randint(0, 1)
    base = {}
    need = 0
    for U in family.members():
        dout, din = cut_degrees(d, U)
        base[U] = g(U) + p * (dout - din)
        need = max(need, ceil(Fraction(k, tau) * (dout - din) - base[U]))
    s = need + rng.randint(0, 1)
    return table_oracle(family, {U: v + s for U, v in base.items()}, "lifted")


def make_rng(seed):
    return random.Random(seed)
