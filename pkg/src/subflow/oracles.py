"""Independent brute-force checks and desk-scale searches.

Nothing here calls the flow-based solvers: the flip and dijoin oracles
enumerate arc subsets with numpy bit operations, so they can be used to
audit the constructive code paths.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .errors import CapacityError, DomainError, InputError, InternalInvariantError, ReductionInapplicable
from .graph import (
    Digraph,
    check_enumerable,
    delta,
    enumerate_dicuts,
    full_mask,
    members,
    proper_subsets,
)
from .lp import OPTIMAL, UNBOUNDED, LinearProgram, enumerate_vertices, is_integral, rank, solve
from .matroids import common_bases
from .setfam import ExplicitFamily, table_oracle

BRUTE_FORCE_ARC_CAP = 20


# -- arc-subset enumeration -----------------------------------------------------------

def _cut_masks(d, sets):
    outs, ins = [], []
    for U in sets:
        out, inc = delta(d, U)
        outs.append(sum(1 << a for a in out))
        ins.append(sum(1 << a for a in inc))
    return np.array(outs, dtype=np.uint64), np.array(ins, dtype=np.uint64)


def _all_subsets(m):
    if m > BRUTE_FORCE_ARC_CAP:
        raise CapacityError(f"{m} arcs exceed the brute-force cap {BRUTE_FORCE_ARC_CAP}")
    return np.arange(1 << m, dtype=np.uint64)


def _pop(x):
    return np.bitwise_count(x).astype(np.int64)


def _smallest(masks):
    """Lexicographically smallest sorted arc tuple among bitmasks."""
    if len(masks) == 0:
        return None
    return frozenset(min(tuple(members(int(J))) for J in masks))


def flip_masks(d, k, f=None):
    """Bitmasks of every k-arc-connected flip that is also an ``f``-flow."""
    Js = _all_subsets(d.m)
    full = np.uint64(full_mask(d.m))
    ok = np.ones(len(Js), dtype=bool)
    if d.n >= 2:
        check_enumerable(d.n)
        outs, ins = _cut_masks(d, proper_subsets(d.n))
        for o, i in zip(outs, ins):
            # arcs leaving U after the flip: unflipped leaving arcs, flipped entering arcs
            ok &= _pop(o & (Js ^ full)) + _pop(i & Js) >= k
    if f is not None:
        sets = f.family.members()
        outs, ins = _cut_masks(d, sets)
        for U, o, i in zip(sets, outs, ins):
            ok &= _pop(o & Js) - _pop(i & Js) <= f(U)
    return Js[ok]


def brute_force_flip(d, k, f=None):
    """Smallest valid flip by exhaustive search, or ``None``.  Hypothesis-free."""
    return _smallest(flip_masks(d, k, f))


def dijoin_pair_masks(d, k1, k2):
    """Bitmasks ``J`` with ``J`` a k1-dijoin and the rest a k2-dijoin."""
    Js = _all_subsets(d.m)
    full = np.uint64(full_mask(d.m))
    ok = np.ones(len(Js), dtype=bool)
    outs, _ = _cut_masks(d, enumerate_dicuts(d))
    for o in outs:
        ok &= (_pop(o & Js) >= k1) & (_pop(o & (Js ^ full)) >= k2)
    return Js[ok]


def brute_force_dijoin_pair(d, k1, k2):
    return _smallest(dijoin_pair_masks(d, k1, k2))


def brute_force_transshipment(d, b, lower, upper):
    """Some integral b-transshipment within finite bounds, or ``None``."""
    ranges = [range(lo, hi + 1) for lo, hi in zip(lower, upper)]
    for y in product(*ranges):
        bal = [0] * d.n
        for (t, h), v in zip(d.arcs, y):
            bal[t] += v
            bal[h] -= v
        if bal == list(b):
            return y
    return None


def brute_force_two_systems(d, f1, f2, values):
    """Every integral ``y`` in ``values^A`` satisfying both systems."""
    rows, rhs = [], []
    for f in (f1, f2):
        for U in f.family.members():
            out, inc = delta(d, U)
            vec = [0] * d.m
            for a in out:
                vec[a] = 1
            for a in inc:
                vec[a] = -1
            rows.append(vec)
            rhs.append(f(U))
    Y = np.array(list(product(values, repeat=d.m)), dtype=np.int64).reshape(-1, d.m)
    if not rows:
        return [tuple(y) for y in Y.tolist()]
    A = np.array(rows, dtype=np.int64)
    ok = np.all(Y @ A.T <= np.array(rhs, dtype=np.int64), axis=1)
    return [tuple(y) for y in Y[ok].tolist()]


# -- integral duals ---------------------------------------------------------------

@dataclass(frozen=True)
class DualSolution:
    z: dict  # (system, U) -> positive integer
    mu: int = None
    value: int = 0


@dataclass(frozen=True)
class NoIntegralDual:
    primal: tuple
    value: Fraction
    reason: str


@dataclass(frozen=True)
class UnboundedPrimal:
    pass


def _system_rows(inst):
    from .solvers import arc_lp

    return arc_lp(inst, extra_box=False)


def check_tdi_at(c, inst, node_limit=20_000):
    """Optimal integral dual of ``max c.y`` over P, searched exactly.

    Any nonnegative ``z`` supported on rows tight at the primal optimum with
    ``sum z_U a_U = c`` is optimal by complementary slackness, so the search
    is a bounded integer feasibility problem, solved by LP branch and bound.
    """
    c = tuple(int(x) for x in c)
    lp = _system_rows(inst)
    res = solve(lp, dict(enumerate(c)))
    if res.status == UNBOUNDED:
        return UnboundedPrimal()
    if res.status != OPTIMAL:
        raise DomainError("P is empty")
    omega = res.value
    if not any(c):
        return DualSolution({}, None, 0)
    if Fraction(omega).denominator != 1:
        return NoIntegralDual(res.point.values, omega, "optimal value is fractional")
    tight = [row for row in lp.rows if row.tag in res.point.tight_rows]
    cap = math.ceil(max(res.duals.values(), default=0)) + 1
    found = _integral_combination(lp, tight, c, cap, node_limit)
    if found is None:
        return NoIntegralDual(res.point.values, omega, f"no integral dual with entries <= {cap}")
    z = {row.tag: v for row, v in zip(tight, found) if v}
    value = sum(row.rhs * v for row, v in zip(tight, found))
    if value != omega:  # pragma: no cover - complementary slackness
        raise InternalInvariantError("integral dual has the wrong value")
    return DualSolution(z, None, int(value))


def _integral_combination(lp, rows, c, cap, node_limit):
    """Nonnegative integers ``z <= cap`` with ``sum z_r a_r = c``."""
    t = len(rows)
    dual = LinearProgram(range(t))
    vecs = [lp.dense(r.coeffs) for r in rows]
    for a in range(len(c)):
        dual.add_row({j: vecs[j][a] for j in range(t)}, "=", c[a], tag=("arc", a))
    stack = [((0,) * t, (cap,) * t)]
    nodes = 0
    while stack:
        lo, hi = stack.pop()
        nodes += 1
        if nodes > node_limit:
            raise CapacityError("integral dual search exceeded its node budget")
        sub = dual.copy()
        for j in range(t):
            sub.add_row({j: 1}, ">=", lo[j], tag=("lo", j))
            sub.add_row({j: 1}, "<=", hi[j], tag=("hi", j))
        r = solve(sub, {})
        if r.status != OPTIMAL:
            continue
        z = r.point.values
        frac = next((j for j, v in enumerate(z) if v.denominator != 1), None)
        if frac is None:
            return tuple(int(v) for v in z)
        v = z[frac]
        up = list(lo)
        up[frac] = math.ceil(v)
        down = list(hi)
        down[frac] = math.floor(v)
        stack.append((tuple(up), hi))
        stack.append((lo, tuple(down)))
    return None


# -- fractional vertices ------------------------------------------------------------

@dataclass(frozen=True)
class FractionalVertex:
    point: object  # VertexPoint
    tight_rank: int


def fractional_vertex_search(inst, max_vars=12, max_rows=40):
    """Every fractional vertex of ``P`` within the instance's bounds."""
    from .solvers import arc_lp

    lp = arc_lp(inst, extra_box=True)
    out = []
    for p in enumerate_vertices(lp, max_vars=max_vars, max_rows=max_rows):
        if not is_integral(p):
            vecs = [lp.dense(r.coeffs) for r in lp.rows if r.tag in p.tight_rows]
            out.append(FractionalVertex(p, rank(vecs)))
    return out


def pairwise_sum_system():
    """Three isolated arcs whose two systems read y_a + y_b, y_b + y_c,
    y_a + y_c <= 1: the smallest instance with a half-integral vertex."""
    from .solvers import TwoSystemInstance

    d = Digraph(6, ((0, 3), (1, 4), (2, 5)))
    fam1 = ExplicitFamily(6, (0b000011, 0b001111), tag="first")
    fam2 = ExplicitFamily(6, (0b000011, 0b010111), tag="second")
    f1 = table_oracle(fam1, {U: 1 for U in fam1.sets}, "first")
    f2 = table_oracle(fam2, {U: 1 for U in fam2.sets}, "second")
    return TwoSystemInstance(d, f1, f2, (0, 0, 0), (1, 1, 1))


# -- three matroids as two flow systems ---------------------------------------------

@dataclass(frozen=True)
class MatroidReduction:
    inst: object  # TwoSystemInstance
    m: int

    def decode(self, y):
        return sum(1 << u for u in range(self.m) if y[u] == 1)


def reduce_matroids_to_two_systems(m1, m2, m3):
    """Two crossing submodular systems on a matching digraph whose integral
    common solutions are the common bases of three matroids."""
    from .solvers import TwoSystemInstance

    m = m1.m
    if m2.m != m or m3.m != m:
        raise ReductionInapplicable("matroids on different ground sets")
    r = m1.rank
    if m2.rank != r or m3.rank != r:
        raise ReductionInapplicable("matroids of different ranks", witness=(m1.rank, m2.rank, m3.rank))
    full = (1 << m) - 1
    for u in range(m):
        if m1(1 << u) != 1:
            raise ReductionInapplicable(f"element {u} is a loop of the first matroid", witness=u)
        if m1(full & ~(1 << u)) != r:
            raise ReductionInapplicable(f"element {u} is a coloop of the first matroid", witness=u)
    n = 2 * m
    d = Digraph(n, tuple((u, m + u) for u in range(m)))
    star = full << m
    first = {}
    second = {}
    for U in range(1, 1 << m):
        first[U] = (m1(U), m1(U))
        W = full | (star & ~(U << m))
        if W != (1 << n) - 1:
            second[W] = (m2(U), m3(U))
    first[star] = (-r, -r)
    values = dict(second)
    values.update(first)  # U = V appears in both parts with value r
    fam = ExplicitFamily(n, tuple(values), tag="matroid-reduction")
    f = table_oracle(fam, {U: v[0] for U, v in values.items()}, "second-matroid")
    g = table_oracle(fam, {U: v[1] for U, v in values.items()}, "third-matroid")
    return MatroidReduction(TwoSystemInstance(d, f, g), m)


def reduction_equivalence(m1, m2, m3):
    """``(has common basis, has integral solution, details)`` by exhaustive
    search on both sides; integral solutions are also checked to be 0/1."""
    red = reduce_matroids_to_two_systems(m1, m2, m3)
    inst = red.inst
    wide = brute_force_two_systems(inst.d, inst.f1, inst.f2, (-1, 0, 1, 2))
    if any(v not in (0, 1) for y in wide for v in y):
        raise InternalInvariantError("reduction admits a non-0/1 integral solution")
    decoded = sorted({red.decode(y) for y in wide})
    bases = sorted(common_bases([m1, m2, m3]))
    return bool(bases), bool(wide), {"bases": bases, "decoded": decoded}


# -- conjecture search --------------------------------------------------------------

@dataclass(frozen=True)
class ConjectureHit:
    d: Digraph
    tau: int
    k: int


def conjecture_search(tau, n, trials, seed, max_arcs=16):
    """Random digraphs with every dicut >= tau; any ``k`` for which no
    split into a k-dijoin and a (tau-k)-dijoin exists is reported."""
    from .generators import make_rng, min_dicut_digraph

    if tau < 2:
        raise InputError("tau must be at least 2")
    rng = make_rng(seed)
    hits = []
    checked = 0
    for _ in range(trials):
        d = min_dicut_digraph(n, tau, rng, max_arcs=max_arcs)
        checked += 1
        for k in range(1, tau):
            if brute_force_dijoin_pair(d, k, tau - k) is None:
                hits.append(ConjectureHit(d, tau, k))
    return checked, hits
