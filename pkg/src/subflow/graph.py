"""Digraphs, cuts, flips, dicuts and dijoins.

Vertex sets are plain ``int`` bitmasks (bit ``v`` set iff ``v`` is a member);
arc sets are ``frozenset``s of arc ids.  Arc ids are positions in
``Digraph.arcs`` and survive flipping.
"""

from dataclasses import dataclass
from functools import cached_property

from .errors import CapacityError, InputError
from .maxflow import FlowNetwork, max_flow

ENUMERATION_CAP = 22
BITMASK_CAP = 63


def vset(members):
    mask = 0
    for v in members:
        mask |= 1 << v
    return mask


def members(mask):
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def full_mask(n):
    return (1 << n) - 1


def proper_subsets(n):
    """Proper non-empty subsets of ``range(n)`` in ascending bitmask order."""
    return range(1, (1 << n) - 1)


def check_enumerable(n, cap=ENUMERATION_CAP):
    if n > cap:
        raise CapacityError(f"n={n} exceeds the subset-enumeration cap {cap}")


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: tuple
    weights: tuple = None

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise InputError(f"vertex count must be a non-negative int, got {self.n!r}")
        if self.n > BITMASK_CAP:
            raise CapacityError(f"n={self.n} exceeds {BITMASK_CAP}")
        arcs = tuple((int(t), int(h)) for (t, h) in self.arcs)
        for i, (t, h) in enumerate(arcs):
            if not (0 <= t < self.n and 0 <= h < self.n):
                raise InputError(f"arc {i} = ({t}, {h}) has an endpoint outside 0..{self.n - 1}")
            if t == h:
                raise InputError(f"arc {i} is a self-loop at {t}")
        object.__setattr__(self, "arcs", arcs)
        if self.weights is None:
            weights = (1,) * len(arcs)
        else:
            weights = tuple(int(w) for w in self.weights)
            if len(weights) != len(arcs):
                raise InputError("one weight per arc required")
            if any(w not in (0, 1) for w in weights):
                raise InputError("arc weights must be 0 or 1")
        object.__setattr__(self, "weights", weights)

    @property
    def m(self):
        return len(self.arcs)

    @cached_property
    def tail_bits(self):
        return tuple(1 << t for t, _ in self.arcs)

    @cached_property
    def head_bits(self):
        return tuple(1 << h for _, h in self.arcs)

    def arc_ids(self):
        return range(len(self.arcs))

    def check_arc_set(self, J):
        J = frozenset(J)
        bad = [a for a in J if not (isinstance(a, int) and 0 <= a < self.m)]
        if bad:
            raise InputError(f"unknown arc ids {sorted(bad)}")
        return J


def delta(d, U):
    """Arcs leaving and entering ``U``."""
    out, inc = [], []
    for a, (tb, hb) in enumerate(zip(d.tail_bits, d.head_bits)):
        if tb & U and not hb & U:
            out.append(a)
        elif hb & U and not tb & U:
            inc.append(a)
    return frozenset(out), frozenset(inc)


def cut_degrees(d, U, J=None):
    """``(d_J^+(U), d_J^-(U))``; ``J=None`` means every arc."""
    dout = din = 0
    for a, (tb, hb) in enumerate(zip(d.tail_bits, d.head_bits)):
        if J is not None and a not in J:
            continue
        if tb & U:
            if not hb & U:
                dout += 1
        elif hb & U:
            din += 1
    return dout, din


def net_out(d, y, U):
    """``y(delta^+(U)) - y(delta^-(U))`` for a per-arc vector ``y``."""
    total = 0
    for a, (tb, hb) in enumerate(zip(d.tail_bits, d.head_bits)):
        if tb & U:
            if not hb & U:
                total += y[a]
        elif hb & U:
            total -= y[a]
    return total


def flip(d, J):
    J = d.check_arc_set(J)
    arcs = tuple((h, t) if a in J else (t, h) for a, (t, h) in enumerate(d.arcs))
    return Digraph(d.n, arcs, d.weights)


def reverse(d):
    return Digraph(d.n, tuple((h, t) for t, h in d.arcs), d.weights)


def subdigraph(d, arc_ids):
    """``D[J]`` on the same vertex set; returns the digraph and new->old arc ids."""
    keep = sorted(d.check_arc_set(arc_ids))
    return Digraph(d.n, tuple(d.arcs[a] for a in keep)), tuple(keep)


def _arc_network(d, source, sink, undirected=False):
    net = FlowNetwork(d.n, source, sink)
    for t, h in d.arcs:
        net.add_arc(t, h, 1)
        if undirected:
            net.add_arc(h, t, 1)
    return net


def arc_connectivity(d, limit=None):
    """Minimum ``d^+(U)`` over proper non-empty ``U`` and a set attaining it.

    Uses ``2(n-1)`` max-flow calls from/to vertex 0.  With ``limit``, returns
    as soon as every pair reaches it (the witness is then ``None``).
    """
    if d.n == 0:
        raise InputError("digraph has no vertices")
    best, witness = None, None
    for v in range(1, d.n):
        for s, t in ((0, v), (v, 0)):
            res = max_flow(_arc_network(d, s, t), limit=limit)
            if best is None or res.value < best:
                best = res.value
                witness = vset(res.min_cut)
                if limit is not None and best < limit:
                    return best, witness
    if best is None:
        return None, None
    if limit is not None and best >= limit:
        return best, None
    return best, witness


def is_k_arc_connected(d, k):
    if d.n == 0:
        raise InputError("digraph has no vertices")
    if k < 1:
        raise InputError("k must be positive")
    if d.n == 1:
        return True
    value, _ = arc_connectivity(d, limit=k)
    return value >= k


def min_underlying_cut(d):
    """Edge connectivity of the underlying multigraph and a minimum cut."""
    if d.n < 2:
        raise InputError("edge connectivity needs at least 2 vertices")
    best, witness = None, None
    for v in range(1, d.n):
        res = max_flow(_arc_network(d, 0, v, undirected=True))
        if best is None or res.value < best:
            best, witness = res.value, vset(res.min_cut)
    return best, witness


def edge_connectivity_underlying(d):
    return min_underlying_cut(d)[0]


def is_weakly_connected(d):
    if d.n <= 1:
        return True
    return edge_connectivity_underlying(d) >= 1


def enumerate_dicuts(d, cap=ENUMERATION_CAP):
    """Every proper non-empty ``U`` with nothing entering it, ascending."""
    check_enumerable(d.n, cap)
    tails, heads = d.tail_bits, d.head_bits
    out = []
    for U in proper_subsets(d.n):
        if not any(hb & U and not tb & U for tb, hb in zip(tails, heads)):
            out.append(U)
    return out


def dijoin_deficit(d, J, k, cap=ENUMERATION_CAP):
    """First dicut-inducing set meeting ``J`` fewer than ``k`` times, or ``None``."""
    J = d.check_arc_set(J)
    for U in enumerate_dicuts(d, cap):
        if cut_degrees(d, U, J)[0] < k:
            return U
    return None


def is_k_dijoin(d, J, k, cap=ENUMERATION_CAP):
    return dijoin_deficit(d, J, k, cap) is None


def is_k_flip(d, J, k):
    return is_k_arc_connected(flip(d, J), k)


def degree_imbalance(d):
    """Out-degree minus in-degree per vertex."""
    bal = [0] * d.n
    for t, h in d.arcs:
        bal[t] += 1
        bal[h] -= 1
    return bal


def is_near_eulerian(d):
    return all(abs(x) <= 1 for x in degree_imbalance(d))
