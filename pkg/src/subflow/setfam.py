"""Crossing families, lattice families and crossing submodular value oracles.

A family never contains the empty set or the whole ground set.  A function is
only defined on its family; outside it the constraint it would generate is
simply absent (never a sentinel value in arithmetic).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Callable

from .errors import CapacityError, DomainError, InputError
from .graph import (
    ENUMERATION_CAP,
    check_enumerable,
    cut_degrees,
    full_mask,
    members,
    proper_subsets,
)

SUBMODULAR_CHECK_CAP = 18


def crosses(U, W, n):
    return bool(U & W) and (U | W) != full_mask(n)


def _check_proper(U, n):
    if U <= 0 or U >= full_mask(n):
        raise InputError(f"set {members(U)} is not a proper non-empty subset of 0..{n - 1}")


class CrossingFamily:
    """Common interface: ``n``, ``contains(U)`` and ``members()``."""

    n: int

    def contains(self, U):
        raise NotImplementedError

    def members(self):
        check_enumerable(self.n)
        return tuple(U for U in proper_subsets(self.n) if self._has(U))

    def _has(self, U):
        return self.contains(U)

    def __len__(self):
        return len(self.members())

    def __iter__(self):
        return iter(self.members())


@dataclass(frozen=True)
class ExplicitFamily(CrossingFamily):
    n: int
    sets: tuple = ()
    tag: str = field(default="explicit", compare=False)

    def __post_init__(self):
        sets = tuple(sorted(set(self.sets)))
        for U in sets:
            _check_proper(U, self.n)
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "_lookup", frozenset(sets))

    def contains(self, U):
        _check_proper(U, self.n)
        return U in self._lookup

    def members(self):
        return self.sets

    def __len__(self):
        return len(self.sets)


@dataclass(frozen=True)
class LatticeFamily:
    """A lattice family given by its minimal member ``lo``, maximal member
    ``hi`` and a preorder; ``below[v]`` is the mask of all ``u`` with u ⪯ v.
    """

    n: int
    lo: int
    hi: int
    below: tuple

    def __post_init__(self):
        if self.lo & ~self.hi:
            raise InputError("lattice family: minimal member not inside maximal member")
        if len(self.below) != self.n:
            raise InputError("lattice family: preorder needs one row per vertex")
        for v, row in enumerate(self.below):
            if not row >> v & 1:
                raise InputError(f"lattice family: preorder not reflexive at {v}")
            for u in members(row):
                if self.below[u] & ~row:
                    raise InputError("lattice family: preorder not transitive")
        if not (self._ideal(self.lo) and self._ideal(self.hi)):
            raise InputError("lattice family: extreme members are not lower ideals")

    def _ideal(self, U):
        for v in members(U):
            if self.below[v] & ~U:
                return False
        return True

    def contains(self, U):
        return not (self.lo & ~U) and not (U & ~self.hi) and self._ideal(U)

    @classmethod
    def from_sets(cls, sets, n):
        """Compact form of the lattice family spanned by ``sets`` (non-empty)."""
        sets = list(sets)
        if not sets:
            raise InputError("cannot describe an empty lattice family")
        lo, hi = full_mask(n), 0
        for S in sets:
            lo &= S
            hi |= S
        below = []
        for v in range(n):
            row = full_mask(n)
            for S in sets:
                if S >> v & 1:
                    row &= S
            below.append(row)
        return cls(n, lo, hi, tuple(below))

    @classmethod
    def from_relations(cls, n, lo, hi, relations=()):
        """Build from explicit ``(u, v)`` pairs meaning u ⪯ v (closure taken)."""
        below = [1 << v for v in range(n)]
        for u, v in relations:
            below[v] |= 1 << u
        changed = True
        while changed:
            changed = False
            for v in range(n):
                row = below[v]
                for u in members(row):
                    row |= below[u]
                if row != below[v]:
                    below[v] = row
                    changed = True
        return cls(n, lo, hi, tuple(below))

    def relations(self):
        return tuple((u, v) for v in range(self.n) for u in members(self.below[v]) if u != v)


@dataclass(frozen=True)
class WellProvidedFamily(CrossingFamily):
    """Crossing family given by the lattice families C_uv for ordered pairs."""

    n: int
    lattices: tuple = ()  # sorted ((u, v), LatticeFamily) pairs; absent pair = empty C_uv
    tag: str = field(default="well-provided", compare=False)

    def __post_init__(self):
        lat = tuple(sorted(dict(self.lattices).items()))
        for (u, v), fam in lat:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"bad lattice pair ({u}, {v})")
            if fam.n != self.n:
                raise InputError("lattice family over a different ground set")
        object.__setattr__(self, "lattices", lat)

    def contains(self, U):
        _check_proper(U, self.n)
        for (u, v), fam in self.lattices:
            if U >> u & 1 and not U >> v & 1 and fam.contains(U):
                return True
        return False

    @classmethod
    def from_explicit(cls, family):
        n = family.n
        lat = []
        for u in range(n):
            for v in range(n):
                if u == v:
                    continue
                sub = [C for C in family.members() if C >> u & 1 and not C >> v & 1]
                if sub:
                    lat.append(((u, v), LatticeFamily.from_sets(sub, n)))
        return cls(n, tuple(lat), tag=family.tag)


def pair_subfamily(family, u, v):
    """C_uv: members containing ``u`` but not ``v``."""
    return [C for C in family.members() if C >> u & 1 and not C >> v & 1]


def is_lattice(sets):
    look = set(sets)
    return all((U & W) in look and (U | W) in look for U in look for W in look)


def check_crossing_family(sets, n):
    """``(True, None)`` or ``(False, (U, W))`` for a crossing pair with a
    missing intersection or union."""
    check_enumerable(n)
    sets = sorted(set(sets))
    look = set(sets)
    for i, U in enumerate(sets):
        for W in sets[i + 1:]:
            if crosses(U, W, n) and ((U & W) not in look or (U | W) not in look):
                return False, (U, W)
    return True, None


def crossing_closure(sets, n):
    """Smallest crossing family containing ``sets``."""
    fam = set(sets)
    for U in fam:
        _check_proper(U, n)
    frontier = list(fam)
    while frontier:
        U = frontier.pop()
        for W in list(fam):
            if crosses(U, W, n):
                for X in (U & W, U | W):
                    if X not in fam:
                        fam.add(X)
                        frontier.append(X)
    return ExplicitFamily(n, tuple(fam), tag="closure")


# -- family builders ---------------------------------------------------------

def all_proper(n):
    check_enumerable(n)
    return ExplicitFamily(n, tuple(proper_subsets(n)), tag="all-proper")


def dicut_family(d):
    from .graph import enumerate_dicuts

    return ExplicitFamily(d.n, tuple(enumerate_dicuts(d)), tag="dicuts")


def isolated_cut_family(d):
    """Proper non-empty ``U`` with no arc crossing in either direction."""
    check_enumerable(d.n)
    sets = [U for U in proper_subsets(d.n) if cut_degrees(d, U) == (0, 0)]
    return ExplicitFamily(d.n, tuple(sets), tag="isolated-cuts")


def singletons_and_complements(n):
    full = full_mask(n)
    sets = set()
    if n >= 2:
        for v in range(n):
            sets.add(1 << v)
            sets.add(full & ~(1 << v))
    return ExplicitFamily(n, tuple(sets), tag="singletons-complements")


def empty_family(n):
    return ExplicitFamily(n, (), tag="empty")


# -- value oracles -----------------------------------------------------------

@dataclass(frozen=True)
class SubmodularOracle:
    """Value oracle ``U -> int`` for a function on a crossing family."""

    family: CrossingFamily
    func: Callable = field(compare=False)
    tag: str = "custom"

    @property
    def n(self):
        return self.family.n

    def __call__(self, U):
        if not self.family.contains(U):
            raise DomainError(f"{members(U)} is outside the family of {self.tag}")
        return self.func(U)

    def get(self, U):
        """Value, or ``None`` (meaning +infinity) outside the family."""
        if U <= 0 or U >= full_mask(self.n) or not self.family.contains(U):
            return None
        return self.func(U)

    def table(self):
        return {U: self.func(U) for U in self.family.members()}


def table_oracle(family, values, tag="table"):
    values = dict(values)
    missing = [U for U in family.members() if U not in values]
    if missing:
        raise InputError(f"table lacks values for {[members(U) for U in missing[:3]]}")
    extra = [U for U in values if not family.contains(U)]
    if extra:
        raise InputError(f"table has values outside the family: {[members(U) for U in extra[:3]]}")
    return SubmodularOracle(family, values.__getitem__, tag)


def outdeg_minus_k(d, k):
    return SubmodularOracle(all_proper(d.n), lambda U: cut_degrees(d, U)[0] - k,
                            f"outdeg-minus:{k}")


def dicut_slack(d, t):
    return SubmodularOracle(dicut_family(d), lambda U: cut_degrees(d, U)[0] - t,
                            f"dicut-slack:{t}")


def ceil_half_imbalance(d):
    def value(U):
        dout, din = cut_degrees(d, U)
        return ceil(Fraction(dout - din, 2))

    return SubmodularOracle(singletons_and_complements(d.n), value, "ceil-half-imbalance")


def modular(d, w, family=None):
    """``U -> w(delta^+(U)) - w(delta^-(U))``; crossing modular on any family."""
    w = tuple(w)
    family = all_proper(d.n) if family is None else family

    def value(U):
        total = 0
        for a, (tb, hb) in enumerate(zip(d.tail_bits, d.head_bits)):
            if tb & U and not hb & U:
                total += w[a]
            elif hb & U and not tb & U:
                total -= w[a]
        return total

    return SubmodularOracle(family, value, "modular")


def constant(family, c, tag=None):
    return SubmodularOracle(family, lambda U: c, tag or f"constant:{c}")


def restrict(f, family):
    """Restriction of ``f`` to a crossing subfamily of its domain."""
    for U in family.members():
        if not f.family.contains(U):
            raise InputError(f"{members(U)} is not in the domain of {f.tag}")
    return SubmodularOracle(family, f.func, f.tag)


# -- checks and minimisation ---------------------------------------------------

def check_crossing_submodular(f, n=None, cap=SUBMODULAR_CHECK_CAP):
    """``(True, None)`` or ``(False, (U, W))`` with
    ``f(U & W) + f(U | W) > f(U) + f(W)`` for a crossing pair in the family."""
    n = f.n if n is None else n
    if n > cap:
        raise CapacityError(f"n={n} exceeds the submodularity-check cap {cap}")
    values = f.table()
    sets = sorted(values)
    for i, U in enumerate(sets):
        for W in sets[i + 1:]:
            if not crosses(U, W, n):
                continue
            a, b = values.get(U & W), values.get(U | W)
            if a is None or b is None:
                continue
            if a + b > values[U] + values[W]:
                return False, (U, W)
    return True, None


def minimize_over_family(f, n=None):
    """Exact minimum of ``f`` over its family; ties go to the smallest bitmask."""
    n = f.n if n is None else n
    check_enumerable(n, ENUMERATION_CAP)
    best, arg = None, None
    for U in f.family.members():
        val = f.func(U)
        if best is None or val < best:
            best, arg = val, U
    if arg is None:
        raise DomainError("cannot minimise over an empty family")
    return best, arg
