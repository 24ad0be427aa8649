"""Integral solutions of two submodular flow systems and their applications.

The pipeline for two systems over a digraph: turn an arc objective into
vertex potentials, pick an integral point of the matching face of the base
polyhedron in vertex space, then route it as a bounded transshipment.  The
flip and dijoin routines are instances of that pipeline with the second
system fixed to ``d^+(U) - k`` on every proper subset.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .basepoint import (
    BaseIntersectionInstance,
    check_precondition,
    integral_base_point,
)
from .errors import (
    ConnectivityTooLow,
    HypothesisViolated,
    Infeasible,
    InputError,
    InternalInvariantError,
    NotTU,
    ObjectiveNotRealizable,
    PreconditionViolated,
    Unbounded,
)
from .graph import (
    check_enumerable,
    cut_degrees,
    degree_imbalance,
    enumerate_dicuts,
    flip,
    full_mask,
    is_k_dijoin,
    is_k_flip,
    is_near_eulerian,
    members,
    min_underlying_cut,
    net_out,
    proper_subsets,
    subdigraph,
)
from .lp import INFEASIBLE, OPTIMAL, LinearProgram, integer_solution, is_integral, solve
from .setfam import (
    SubmodularOracle,
    all_proper,
    ceil_half_imbalance,
    constant,
    dicut_family,
    empty_family,
    minimize_over_family,
    outdeg_minus_k,
)
from .transshipment import INF, TransshipmentInstance, cut_capacity, solve_transshipment
from .tu import bad_minor, check_matrix, ghouila_houri_failure

INTEGRAL = "integral"
VIOLATING_SET = "violating-set"


# -- result types ----------------------------------------------------------------

@dataclass(frozen=True)
class TwoSystemInstance:
    d: object
    f1: SubmodularOracle
    f2: SubmodularOracle
    lower: tuple = None
    upper: tuple = None
    objective: tuple = None  # integer per arc; None or all-zero means P itself

    def __post_init__(self):
        m = self.d.m
        lower = (-INF,) * m if self.lower is None else tuple(self.lower)
        upper = (INF,) * m if self.upper is None else tuple(self.upper)
        if len(lower) != m or len(upper) != m:
            raise InputError("one bound per arc required")
        if any(lo > hi for lo, hi in zip(lower, upper)):
            raise InputError("lower bound above upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        for f in (self.f1, self.f2):
            if f.n != self.d.n:
                raise InputError("family over a different vertex set")
        if self.objective is not None:
            c = tuple(int(x) for x in self.objective)
            if len(c) != m:
                raise InputError("one objective coefficient per arc required")
            object.__setattr__(self, "objective", c if any(c) else None)


@dataclass(frozen=True)
class TwoSystemResult:
    status: str
    y: tuple = None
    violating_set: int = None
    excess: object = None  # b(U) - (u(out) - l(in)) for the violating set
    base_point: tuple = None


@dataclass(frozen=True)
class HypothesisReport:
    ok: bool
    violating_set: int = None
    slack: Fraction = None  # lhs - tau at the violating set (negative)


@dataclass(frozen=True)
class FlipCertificate:
    J: frozenset
    k: int
    tau: int
    k_flip: bool
    family_ok: bool
    near_eulerian: bool = None


@dataclass(frozen=True)
class DecompositionResult:
    part1: frozenset
    part2: frozenset
    roles: tuple
    checks: tuple = field(default=())  # (name, passed) pairs

    @property
    def verified(self):
        return all(ok for _, ok in self.checks)


# -- two systems over a digraph ------------------------------------------------------

def potentials(d, c):
    """Integral ``w`` with ``w[tail] - w[head] = c[a]`` for every arc.

    Each weak component is rooted at its smallest vertex (``w = 0``).
    An inconsistent cycle raises ``ObjectiveNotRealizable`` with the arc
    that closes it.
    """
    w = [None] * d.n
    adj = [[] for _ in range(d.n)]
    for a, (t, h) in enumerate(d.arcs):
        adj[t].append((a, h, -c[a]))
        adj[h].append((a, t, c[a]))
    for root in range(d.n):
        if w[root] is not None:
            continue
        w[root] = 0
        stack = [root]
        while stack:
            v = stack.pop()
            for a, x, step in adj[v]:
                if w[x] is None:
                    w[x] = w[v] + step
                    stack.append(x)
    for a, (t, h) in enumerate(d.arcs):
        if w[t] - w[h] != c[a]:
            raise ObjectiveNotRealizable(
                f"objective is not a potential difference around arc {a}", witness=a,
                slack=c[a] - (w[t] - w[h]))
    return tuple(w)


def check_two_systems(d, f1, f2, y):
    """First ``(i, U)`` with ``y(out) - y(in) > f_i(U)``, or ``None``."""
    for i, f in ((1, f1), (2, f2)):
        for U in f.family.members():
            if net_out(d, y, U) > f(U):
                return i, U
    return None


def solve_two_systems(inst, order=None):
    """Integral ``y`` in the chosen face of P within the bounds, or a set
    violating the cut condition, or an infeasible/unbounded verdict."""
    d = inst.d
    check_precondition(d, inst.f1, inst.f2)
    w = None if inst.objective is None else potentials(d, inst.objective)
    base = BaseIntersectionInstance(d.n, inst.f1, inst.f2, objective=w)
    try:
        b = integral_base_point(base, order=order).values
    except Infeasible:
        return TwoSystemResult(INFEASIBLE)
    except Unbounded:
        return TwoSystemResult("unbounded")
    b = tuple(int(x) for x in b)
    flow = solve_transshipment(TransshipmentInstance(d, b, inst.lower, inst.upper))
    if not flow.feasible:
        return TwoSystemResult(VIOLATING_SET, violating_set=flow.violating_set,
                               excess=flow.excess, base_point=b)
    y = flow.flow
    bad = check_two_systems(d, inst.f1, inst.f2, y)
    if bad is not None or any(not lo <= v <= hi for v, lo, hi in zip(y, inst.lower, inst.upper)):
        raise InternalInvariantError(f"routed point violates the systems at {bad}")
    return TwoSystemResult(INTEGRAL, y=y, base_point=b)


def cut_condition_violation(inst):
    """First proper ``U`` with ``min f_i(U) > u(out) - l(in)`` (enumeration).

    A set outside both families has ``min f_i = +inf`` and so fails as soon
    as its capacity is finite.
    """
    check_enumerable(inst.d.n)
    for U in proper_subsets(inst.d.n):
        vals = [v for v in (inst.f1.get(U), inst.f2.get(U)) if v is not None]
        cap = cut_capacity(inst.d, inst.lower, inst.upper, U)
        if cap == INF:
            continue
        if not vals or min(vals) > cap:
            return U
    return None


def arc_lp(inst, extra_box=True):
    """P (with finite bounds as rows when ``extra_box``) over arc variables."""
    d = inst.d
    lp = LinearProgram(range(d.m))
    for i, f in ((1, inst.f1), (2, inst.f2)):
        for U in f.family.members():
            out, inc = _cut_sets(d, U)
            coeffs = {a: 1 for a in out}
            coeffs.update({a: -1 for a in inc})
            lp.add_row(coeffs, "<=", f(U), tag=(i, U))
    if extra_box:
        for a in range(d.m):
            if inst.lower[a] != -INF:
                lp.add_row({a: 1}, ">=", inst.lower[a], tag=("lower", a))
            if inst.upper[a] != INF:
                lp.add_row({a: 1}, "<=", inst.upper[a], tag=("upper", a))
    return lp


def _cut_sets(d, U):
    out, inc = [], []
    for a, (tb, hb) in enumerate(zip(d.tail_bits, d.head_bits)):
        if tb & U and not hb & U:
            out.append(a)
        elif hb & U and not tb & U:
            inc.append(a)
    return out, inc


# -- totally unimodular generalisation -------------------------------------------------

@dataclass(frozen=True)
class TUInstance:
    M: tuple  # rows indexed by ground elements 0..n-1
    f1: SubmodularOracle
    f2: SubmodularOracle
    lower: tuple = None
    upper: tuple = None
    objective: tuple = None
    trust_tu: bool = False

    def __post_init__(self):
        rows = tuple(tuple(r) for r in check_matrix(self.M))
        object.__setattr__(self, "M", rows)
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(sum(r[j] for r in rows) for j in range(m)):
            raise InputError("columns of M must sum to zero")
        for f in (self.f1, self.f2):
            if f.n != n:
                raise InputError("families must live on the row index set")
        lower = (-INF,) * m if self.lower is None else tuple(self.lower)
        upper = (INF,) * m if self.upper is None else tuple(self.upper)
        if len(lower) != m or len(upper) != m or any(lo > hi for lo, hi in zip(lower, upper)):
            raise InputError("bad bounds")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if self.objective is not None:
            c = tuple(int(x) for x in self.objective)
            if len(c) != m:
                raise InputError("one objective coefficient per column required")
            object.__setattr__(self, "objective", c if any(c) else None)

    @property
    def n(self):
        return len(self.M)

    @property
    def m(self):
        return len(self.M[0]) if self.M else 0


def cut_vector(M, U):
    """``M^T chi_U``."""
    m = len(M[0]) if M else 0
    return tuple(sum(M[v][j] for v in members(U)) for j in range(m))


def tu_cut_capacity(M, lower, upper, U):
    """Largest value of ``(M^T chi_U) . y`` over the box ``[lower, upper]``."""
    total = 0
    for g, lo, hi in zip(cut_vector(M, U), lower, upper):
        if g > 0:
            total += g * hi
        elif g < 0:
            total += g * lo
    return total


def solve_tu_generalization(inst, order=None):
    """Same verdicts as :func:`solve_two_systems`, for a TU matrix ``M``
    with zero column sums in place of the incidence matrix."""
    M, n, m = inst.M, inst.n, inst.m
    if not inst.trust_tu:
        fail = ghouila_houri_failure(M)
        if fail is not None:
            raise NotTU("matrix is not totally unimodular", witness=bad_minor(M) or fail)
    check_enumerable(n)
    for U in proper_subsets(n):
        if not any(cut_vector(M, U)):
            vals = [v for v in (inst.f1.get(U), inst.f2.get(U)) if v is not None]
            if not vals or min(vals) > 0:
                raise PreconditionViolated(
                    f"kernel set {list(members(U))} has min(f1, f2) > 0", witness=U,
                    slack=min(vals) if vals else None)
    w = None
    if inst.objective is not None:
        cols = [[M[v][j] for v in range(n)] for j in range(m)]
        w = integer_solution(cols, list(inst.objective))
        if w is None:
            raise ObjectiveNotRealizable("objective is not in the integral row space of M")
    base = BaseIntersectionInstance(n, inst.f1, inst.f2, objective=w)
    try:
        b = tuple(int(x) for x in integral_base_point(base, order=order).values)
    except Infeasible:
        return TwoSystemResult(INFEASIBLE)
    except Unbounded:
        return TwoSystemResult("unbounded")

    lp = LinearProgram(range(m))
    for v in range(n):
        lp.add_row({j: M[v][j] for j in range(m)}, "=", b[v], tag=("node", v))
    for j in range(m):
        if inst.lower[j] != -INF:
            lp.add_row({j: 1}, ">=", inst.lower[j], tag=("lower", j))
        if inst.upper[j] != INF:
            lp.add_row({j: 1}, "<=", inst.upper[j], tag=("upper", j))
    res = solve(lp, {})
    if res.status != OPTIMAL:
        for U in proper_subsets(n):
            cap = tu_cut_capacity(M, inst.lower, inst.upper, U)
            excess = sum(b[v] for v in members(U)) - cap
            if excess > 0:
                return TwoSystemResult(VIOLATING_SET, violating_set=U, excess=excess, base_point=b)
        raise InternalInvariantError("infeasible flow system without a violated cut")
    y = res.point.values
    if not is_integral(y):
        raise InternalInvariantError(f"basic solution {y} of a TU system is fractional")
    y = tuple(int(v) for v in y)
    for i, f in ((1, inst.f1), (2, inst.f2)):
        for U in f.family.members():
            if sum(g * v for g, v in zip(cut_vector(M, U), y)) > f(U):
                raise InternalInvariantError(f"solution violates system {i} at {members(U)}")
    return TwoSystemResult(INTEGRAL, y=y, base_point=b)


# -- flips ----------------------------------------------------------------------

def _check_tau_k(tau, k):
    if not (isinstance(tau, int) and isinstance(k, int)) or tau < 1 or k < 1:
        raise InputError("tau and k must be positive integers")


def hypothesis_lhs(dout, din, tau, k):
    return dout + (Fraction(tau, k) - 1) * din


def verify_hypothesis(d, tau, k):
    """``d^+(U) + (tau/k - 1) d^-(U) >= tau`` on every proper ``U``?

    Minimises ``g(U) = d^+(U) - k - (k/tau)(d^+(U) - d^-(U))``; a negative
    minimum at ``U`` means the inequality fails at the complement of ``U``.
    """
    _check_tau_k(tau, k)
    if d.n < 2:
        return HypothesisReport(True)
    r = Fraction(k, tau)

    def g(U):
        dout, din = cut_degrees(d, U)
        return dout - k - r * (dout - din)

    value, U = minimize_over_family(SubmodularOracle(all_proper(d.n), g, "hypothesis"))
    if value >= 0:
        return HypothesisReport(True)
    W = full_mask(d.n) & ~U
    dout, din = cut_degrees(d, W)
    return HypothesisReport(False, W, hypothesis_lhs(dout, din, tau, k) - tau)


def check_f_lower_bound(d, tau, k, f):
    """First member with ``f(U) < (k/tau)(d^+(U) - d^-(U))`` and its slack."""
    r = Fraction(k, tau)
    for U in f.family.members():
        dout, din = cut_degrees(d, U)
        slack = f(U) - r * (dout - din)
        if slack < 0:
            return U, slack
    return None


def find_k_flip(d, tau, k, f=None):
    """A k-arc-connected flip that is also a submodular flow for ``f``."""
    _check_tau_k(tau, k)
    rep = verify_hypothesis(d, tau, k)
    if not rep.ok:
        raise HypothesisViolated(
            f"cut inequality fails at {list(members(rep.violating_set))}",
            witness=rep.violating_set, slack=rep.slack)
    if f is None:
        f = constant(empty_family(d.n), 0, "none")
    bad = check_f_lower_bound(d, tau, k, f)
    if bad is not None:
        raise HypothesisViolated(
            f"f is below (k/tau)(d+ - d-) at {list(members(bad[0]))}", witness=bad[0], slack=bad[1])
    inst = TwoSystemInstance(d, f, outdeg_minus_k(d, k), (0,) * d.m, (1,) * d.m)
    try:
        res = solve_two_systems(inst)
    except PreconditionViolated as exc:
        raise InternalInvariantError(f"hypothesis holds but isolated cut found: {exc}") from exc
    if res.status != INTEGRAL:
        raise InternalInvariantError(f"hypothesis holds but the solver returned {res.status}")
    J = frozenset(a for a, v in enumerate(res.y) if v == 1)
    ok_flip = is_k_flip(d, J, k)
    ok_family = all(net_out(d, res.y, U) <= f(U) for U in f.family.members())
    if not (ok_flip and ok_family):
        raise InternalInvariantError("flip certificate failed re-verification")
    return FlipCertificate(J, k, tau, ok_flip, ok_family)


def _underlying_ec(d):
    if d.n < 2:
        return math.inf, None
    return min_underlying_cut(d)


def near_eulerian_flip(d, k):
    """k-arc-connected flip after which every vertex is balanced up to one."""
    _check_tau_k(2 * k, k)
    ec, cut = _underlying_ec(d)
    if ec < 2 * k:
        raise ConnectivityTooLow(
            f"underlying graph is only {ec}-edge-connected, need {2 * k}", witness=cut, slack=ec - 2 * k)
    cert = find_k_flip(d, 2 * k, k, ceil_half_imbalance(d))
    balanced = is_near_eulerian(flip(d, cert.J))
    if not balanced:
        raise InternalInvariantError(f"flip leaves imbalance {degree_imbalance(flip(d, cert.J))}")
    return FlipCertificate(cert.J, k, 2 * k, cert.k_flip, cert.family_ok, balanced)


# -- decompositions ----------------------------------------------------------------

def _check_split(tau, k):
    _check_tau_k(tau, k)
    if not 1 <= k <= tau - 1:
        raise InputError(f"need 1 <= k <= tau - 1, got k={k}, tau={tau}")


def decompose_flip_dijoin(d, tau, k):
    """Split ``A`` into a k-arc-connected flip and a (tau-k)-dijoin."""
    _check_split(tau, k)
    fam = dicut_family(d)
    f = SubmodularOracle(fam, lambda U: cut_degrees(d, U)[0] - (tau - k), f"dicut-slack:{tau - k}")
    cert = find_k_flip(d, tau, k, f)
    rest = frozenset(d.arc_ids()) - cert.J
    checks = (("k-flip", is_k_flip(d, cert.J, k)),
              ("dijoin", is_k_dijoin(d, rest, tau - k)))
    return _finish(cert.J, rest, (f"{k}-flip", f"{tau - k}-dijoin"), checks)


def _finish(part1, part2, roles, checks):
    res = DecompositionResult(frozenset(part1), frozenset(part2), roles, checks)
    if not res.verified:
        failed = [name for name, ok in checks if not ok]
        raise InternalInvariantError(f"decomposition failed re-verification: {failed}")
    return res


def verify_weighted_hypothesis(d, w, tau, k):
    """``w(out) + (tau/k - 1) w(in) >= tau`` on every proper ``U``."""
    _check_tau_k(tau, k)
    check_enumerable(d.n)
    for U in proper_subsets(d.n):
        out, inc = _cut_sets(d, U)
        lhs = hypothesis_lhs(sum(w[a] for a in out), sum(w[a] for a in inc), tau, k)
        if lhs < tau:
            return HypothesisReport(False, U, lhs - tau)
    return HypothesisReport(True)


def weighted_decompose(d, w, tau, k):
    """Split the weight-one arcs into a k-flip of that subdigraph and a
    (tau-k)-dijoin of the whole digraph."""
    _check_split(tau, k)
    w = tuple(int(x) for x in w)
    if len(w) != d.m or any(x not in (0, 1) for x in w):
        raise InputError("w must be a 0/1 vector over the arcs")
    rep = verify_weighted_hypothesis(d, w, tau, k)
    if not rep.ok:
        raise HypothesisViolated(
            f"weighted cut inequality fails at {list(members(rep.violating_set))}",
            witness=rep.violating_set, slack=rep.slack)
    support = [a for a in d.arc_ids() if w[a] == 1]
    sub, back = subdigraph(d, support)
    fam = dicut_family(d)
    f = SubmodularOracle(fam, lambda U: cut_degrees(sub, U)[0] - (tau - k), "weighted-dicut-slack")
    cert = find_k_flip(sub, tau, k, f)
    J = frozenset(back[a] for a in cert.J)
    rest = frozenset(support) - J
    checks = (("k-flip of support", is_k_flip(sub, cert.J, k)),
              ("dijoin of digraph", is_k_dijoin(d, rest, tau - k)))
    return _finish(J, rest, (f"{k}-flip", f"{tau - k}-dijoin"), checks)


def dijoin_pair_decompose(d, tau, k):
    """Split ``A`` into a k-dijoin and a (tau-k)-dijoin when the underlying
    graph is tau-edge-connected."""
    _check_split(tau, k)
    ec, cut = _underlying_ec(d)
    if ec < tau:
        raise ConnectivityTooLow(
            f"underlying graph is only {ec}-edge-connected, need {tau}", witness=cut, slack=ec - tau)
    small = min(k, tau - k)
    res = decompose_flip_dijoin(d, tau, small)
    if small == k:
        first, second = res.part1, res.part2
    else:
        first, second = res.part2, res.part1
    checks = (("first dijoin", is_k_dijoin(d, first, k)),
              ("second dijoin", is_k_dijoin(d, second, tau - k)))
    return _finish(first, second, (f"{k}-dijoin", f"{tau - k}-dijoin"), checks)


def balanced_cut_condition(d, tau):
    """Dicuts have size >= tau; cuts have size >= tau - 1, and a cut of
    size exactly tau - 1 is balanced.  Returns ``(ok, witness)``."""
    check_enumerable(d.n)
    for U in proper_subsets(d.n):
        dout, din = cut_degrees(d, U)
        if din == 0 and dout < tau:
            return False, U
        if dout + din < tau - 1:
            return False, U
        if dout + din == tau - 1 and dout != din:
            return False, U
    return True, None


def dicut_minimum(d):
    """Smallest dicut size (``None`` if there are no dicuts)."""
    sizes = [cut_degrees(d, U)[0] for U in enumerate_dicuts(d)]
    return min(sizes, default=None)
