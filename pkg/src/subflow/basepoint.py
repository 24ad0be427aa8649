"""Integral points of the intersection of two base systems.

The polyhedron lives in vertex space: ``{x : 1.x = 0, x(U) <= f_i(U)}``.
Both systems together are box-TDI, so the polyhedron is integral: every
minimal face holds an integral point.  A lexicographic maximum is a vertex
when the face has one; otherwise the face contains a line and an integral
point of a minimal face is found by Hermite normal form.
"""

from dataclasses import dataclass, field

from .errors import (
    Infeasible,
    InputError,
    InternalInvariantError,
    PreconditionViolated,
    Unbounded,
)
from .graph import members
from .lp import (
    INFEASIBLE,
    OPTIMAL,
    LexStageError,
    LinearProgram,
    integral_point_on_minimal_face,
    is_integral,
    lex_maximize,
    point_at,
    solve,
)

BALANCE = "balance"


@dataclass(frozen=True)
class BaseIntersectionInstance:
    n: int
    f1: object
    f2: object
    faces1: frozenset = field(default_factory=frozenset)  # members forced to equality
    faces2: frozenset = field(default_factory=frozenset)
    objective: tuple = None  # integer weight per vertex

    def __post_init__(self):
        for f in (self.f1, self.f2):
            if f.n != self.n:
                raise InputError("families over different ground sets")
        object.__setattr__(self, "faces1", frozenset(self.faces1))
        object.__setattr__(self, "faces2", frozenset(self.faces2))
        for faces, f in ((self.faces1, self.f1), (self.faces2, self.f2)):
            for U in faces:
                if not f.family.contains(U):
                    raise InputError(f"face set {members(U)} is not a family member")
        if self.objective is not None:
            if len(self.objective) != self.n:
                raise InputError("one objective weight per vertex required")
            object.__setattr__(self, "objective", tuple(int(w) for w in self.objective))


def build_lp(inst):
    """One row per family member (tag ``(i, U)``) plus the balance row."""
    lp = LinearProgram(range(inst.n))
    for i, f, faces in ((1, inst.f1, inst.faces1), (2, inst.f2, inst.faces2)):
        for U in f.family.members():
            lp.add_row({v: 1 for v in members(U)}, "=" if U in faces else "<=", f(U), tag=(i, U))
    lp.add_row({v: 1 for v in range(inst.n)}, "=", 0, tag=BALANCE)
    return lp


def components(d):
    """Vertex masks of the weak components, ordered by smallest vertex."""
    parent = list(range(d.n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for t, h in d.arcs:
        rt, rh = find(t), find(h)
        if rt != rh:
            parent[max(rt, rh)] = min(rt, rh)
    comps = {}
    for v in range(d.n):
        comps[find(v)] = comps.get(find(v), 0) | 1 << v
    return [comps[r] for r in sorted(comps)]


def isolated_cuts(d):
    """Proper non-empty sets with no arc crossing either way (unions of
    weak components), ascending."""
    comps = components(d)
    out = []
    for pick in range(1, (1 << len(comps)) - 1):
        U = 0
        for j, C in enumerate(comps):
            if pick >> j & 1:
                U |= C
        out.append(U)
    return sorted(out)


def isolated_cut_violation(d, f1, f2):
    """First isolated cut set where ``min(f1, f2) > 0`` (absent = +inf)."""
    for U in isolated_cuts(d):
        vals = [v for v in (f1.get(U), f2.get(U)) if v is not None]
        if not vals or min(vals) > 0:
            return U, (min(vals) if vals else None)
    return None


def check_precondition(d, f1, f2):
    bad = isolated_cut_violation(d, f1, f2)
    if bad is not None:
        U, val = bad
        shown = "+inf" if val is None else val
        raise PreconditionViolated(
            f"isolated cut set {list(members(U))} has min(f1, f2) = {shown} > 0",
            witness=U, slack=val)


def integral_base_point(inst, d=None, order=None):
    """An integral point of the (optimal) face, as a ``VertexPoint``.

    Raises ``PreconditionViolated`` (when ``d`` is given), ``Infeasible`` or
    ``Unbounded`` (objective only); an integrality failure would contradict
    box-TDI-ness and raises ``InternalInvariantError``.
    """
    if d is not None:
        check_precondition(d, inst.f1, inst.f2)
    lp = build_lp(inst)
    order = list(range(inst.n)) if order is None else list(order)
    work = lp.copy()
    if inst.objective is not None:
        res = solve(lp, dict(enumerate(inst.objective)))
        if res.status == INFEASIBLE:
            raise Infeasible("the base polyhedron is empty")
        if res.status != OPTIMAL:
            raise Unbounded("objective is unbounded over the base polyhedron")
        work.add_row(dict(enumerate(inst.objective)), "=", res.value, tag="objective")
    elif solve(lp, {}).status == INFEASIBLE:
        raise Infeasible("the face of the base polyhedron is empty")

    try:
        values = lex_maximize(work, order).values
    except LexStageError as exc:
        if exc.status == INFEASIBLE:  # pragma: no cover - feasibility checked above
            raise Infeasible("the face of the base polyhedron is empty") from exc
        # no vertex: the face contains a line, so take an integral point of
        # a minimal face (an affine subspace) instead
        values = integral_point_on_minimal_face(work, solve(work, {}).point.values)
        if values is None:
            raise InternalInvariantError("minimal face without an integral point") from exc
    if not is_integral(values):
        raise InternalInvariantError(f"non-integral base point {values}")
    if not lp.satisfied(values):  # pragma: no cover
        raise InternalInvariantError("base point violates its own system")
    return point_at(lp, values)

