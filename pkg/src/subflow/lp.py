"""Exact rational linear programming.

Everything is ``fractions.Fraction`` (or ``int``); there is no floating point.

Problems are stated in inequality form over free variables,
``max c.x  s.t.  rows (<=, =, >=)``, and solved through their dual
``min b.z  s.t.  A^T z = c, z >= 0`` with a two-phase tableau simplex under
Bland's rule.  The primal point is read off the dual's simplex multipliers,
so an optimal answer is always a basic solution, and a vertex whenever the
feasible region is pointed.  The primal problems here have few variables and
many rows, which is exactly the shape for which the dual tableau is small.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count

from .errors import CapacityError, DomainError, InputError, InternalInvariantError

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

_ONE = Fraction(1)


def as_rational(x):
    if isinstance(x, (int, Fraction)):
        return x
    if isinstance(x, str):
        return Fraction(x)
    raise InputError(f"{x!r} is not an exact rational")


def fmt(x):
    """``p/q`` rendering used in every report."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Row:
    coeffs: tuple  # ((variable, coefficient), ...)
    sense: str
    rhs: object
    tag: object


class LinearProgram:
    """Inequality system with provenance-tagged rows and a ``max`` objective."""

    SENSES = ("<=", "=", ">=")

    def __init__(self, variables, objective=None):
        self.variables = tuple(variables)
        self.index = {v: i for i, v in enumerate(self.variables)}
        if len(self.index) != len(self.variables):
            raise InputError("duplicate variable names")
        self.rows = []
        self._tags = set()
        self.objective = {}
        if objective:
            self.set_objective(objective)

    def _check_coeffs(self, coeffs):
        out = []
        for var, c in dict(coeffs).items():
            if var not in self.index:
                raise InputError(f"unknown variable {var!r}")
            c = as_rational(c)
            if c:
                out.append((var, c))
        out.sort(key=lambda vc: self.index[vc[0]])
        return tuple(out)

    def add_row(self, coeffs, sense, rhs, tag=None):
        if sense not in self.SENSES:
            raise InputError(f"unknown relation {sense!r}")
        if tag is None:
            tag = ("row", len(self.rows))
        if tag in self._tags:
            raise InputError(f"duplicate row tag {tag!r}")
        self._tags.add(tag)
        self.rows.append(Row(self._check_coeffs(coeffs), sense, as_rational(rhs), tag))
        return tag

    def set_objective(self, coeffs):
        self.objective = dict(self._check_coeffs(coeffs))

    def copy(self):
        other = LinearProgram(self.variables)
        other.rows = list(self.rows)
        other._tags = set(self._tags)
        other.objective = dict(self.objective)
        return other

    def dense(self, coeffs):
        vec = [0] * len(self.variables)
        for var, c in coeffs:
            vec[self.index[var]] = c
        return vec

    def le_rows(self):
        """Rows as ``(dense coefficients, rhs, tag, sign)`` in ``<=`` form;
        equalities contribute two rows."""
        out = []
        for row in self.rows:
            vec = self.dense(row.coeffs)
            if row.sense in ("<=", "="):
                out.append((vec, row.rhs, row.tag, 1))
            if row.sense in (">=", "="):
                out.append(([-c for c in vec], -row.rhs, row.tag, -1))
        return out

    def satisfied(self, values):
        return all(_row_ok(self.dense(r.coeffs), r.sense, r.rhs, values) for r in self.rows)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b) if x and y)


def _row_ok(vec, sense, rhs, x):
    lhs = _dot(vec, x)
    if sense == "<=":
        return lhs <= rhs
    if sense == ">=":
        return lhs >= rhs
    return lhs == rhs


@dataclass(frozen=True)
class VertexPoint:
    variables: tuple
    values: tuple
    tight_rows: frozenset
    basis_rank: int

    def __getitem__(self, var):
        return self.values[self.variables.index(var)]

    def as_dict(self):
        return dict(zip(self.variables, self.values))

    @property
    def is_vertex(self):
        return self.basis_rank == len(self.variables)


@dataclass(frozen=True)
class LPResult:
    status: str
    point: VertexPoint = None
    value: object = None
    duals: dict = field(default=None, compare=False)


# -- linear algebra over the rationals ------------------------------------------

def rank(rows):
    return len(_echelon([list(r) for r in rows])[1])


def _echelon(rows):
    """Row-reduce in place; returns (rows, pivot columns)."""
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = _ONE / rows[r][c]
        rows[r] = [v * inv if v else 0 for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b if b else a for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def nullspace(rows, ncols):
    """Basis of ``{d : row.d = 0 for every row}``."""
    if not rows:
        return [[_ONE if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    red, piv = _echelon([list(r) for r in rows])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        d = [0] * ncols
        d[f] = _ONE
        for i, p in enumerate(piv):
            d[p] = -red[i][f]
        basis.append(d)
    return basis


def solve_square(rows, rhs):
    """Unique solution of a nonsingular square system (``None`` if singular)."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = _echelon(aug)
    if piv[:n] != list(range(n)):
        return None
    return [red[i][n] for i in range(n)]


def inverse(rows):
    n = len(rows)
    aug = [list(r) + [_ONE if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    red, piv = _echelon(aug)
    if piv[:n] != list(range(n)):
        return None
    return [row[n:] for row in red]


def integer_solution(rows, rhs):
    """Integral ``y`` with ``rows . y = rhs`` or ``None``; integer data only.

    Column-style Hermite reduction: unimodular column operations bring the
    matrix to lower echelon form, then forward substitution must divide
    exactly.
    """
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    for r, b in zip(rows, rhs):
        if any(Fraction(v).denominator != 1 for v in r) or Fraction(b).denominator != 1:
            raise InputError("integer_solution needs integral data")
    A = [[int(v) for v in r] for r in rows]
    U = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def colop(j, k, a, b, c, d):
        # (col j, col k) <- (a*col j + b*col k, c*col j + d*col k), det = +-1
        for M in (A, U):
            for row in M:
                x, y = row[j], row[k]
                row[j], row[k] = a * x + b * y, c * x + d * y

    pivots = []  # (row, col)
    col = 0
    for i in range(m):
        if col == ncols:
            break
        for k in range(col + 1, ncols):
            x, y = A[i][col], A[i][k]
            if y == 0:
                continue
            g, s, t = _egcd(x, y)
            colop(col, k, s, t, -y // g, x // g)
        if A[i][col] == 0:
            continue
        if A[i][col] < 0:
            for M in (A, U):
                for row in M:
                    row[col] = -row[col]
        pivots.append((i, col))
        col += 1

    z = [0] * ncols
    for i, c in pivots:
        resid = int(rhs[i]) - sum(A[i][j] * z[j] for j in range(c))
        if resid % A[i][c]:
            return None
        z[c] = resid // A[i][c]
    y = [sum(U[r][j] * z[j] for j in range(ncols)) for r in range(ncols)]
    for r, b in zip(rows, rhs):
        if sum(int(a) * v for a, v in zip(r, y)) != int(b):
            return None
    return tuple(y)


def _egcd(a, b):
    """``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) > 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


# -- standard-form simplex ---------------------------------------------------------

@dataclass
class StandardResult:
    status: str
    z: list = None
    multipliers: list = None
    value: object = None
    basis: list = None
    pivots: list = None


def solve_standard(A, b, c, max_pivots=None, log_bases=False):
    """``min c.z  s.t.  A z = b, z >= 0`` by the two-phase Bland simplex.

    ``multipliers`` are the simplex multipliers ``pi`` with
    ``c_j - pi.A_j >= 0`` at optimality.  With ``log_bases`` the basis after
    each pivot is recorded in ``pivots`` (Bland's rule never repeats one).
    """
    m = len(A)
    N = len(c)
    signs = [1] * m
    T = []
    for i in range(m):
        row = list(A[i]) + [0] * m + [b[i]]
        if b[i] < 0:
            signs[i] = -1
            row = [-v for v in row]
        row[N + i] = 1
        T.append(row)
    basis = [N + i for i in range(m)]
    width = N + m + 1
    log = [] if log_bases else None

    # phase I: minimise the sum of artificials
    obj = [0] * width
    for i in range(m):
        for j in range(N):
            if T[i][j]:
                obj[j] -= T[i][j]
        obj[-1] -= T[i][-1]
    status = _run(T, obj, basis, allowed=N, log=log, max_pivots=max_pivots)
    if status != OPTIMAL:  # cannot happen: phase I is bounded below by 0
        raise InternalInvariantError("phase I unbounded")
    if obj[-1] != 0:
        return StandardResult(INFEASIBLE, pivots=log)

    # drive artificials out of the basis where a real column can replace them
    for i in range(m):
        if basis[i] >= N:
            j = next((j for j in range(N) if T[i][j]), None)
            if j is not None:
                _pivot(T, [obj], basis, i, j)

    obj = [0] * width
    for j in range(N):
        obj[j] = c[j]
    for i in range(m):
        cb = c[basis[i]] if basis[i] < N else 0
        if cb:
            for j in range(width):
                if T[i][j]:
                    obj[j] -= cb * T[i][j]
    status = _run(T, obj, basis, allowed=N, log=log, max_pivots=max_pivots)
    if status == UNBOUNDED:
        return StandardResult(UNBOUNDED, pivots=log)
    z = [0] * N
    for i in range(m):
        if basis[i] < N:
            z[basis[i]] = T[i][-1]
    pi = [signs[i] * -obj[N + i] for i in range(m)]
    return StandardResult(OPTIMAL, z, pi, -obj[-1], list(basis), log)


def _run(T, obj, basis, allowed, log, max_pivots):
    for step in count():
        if max_pivots is not None and step >= max_pivots:
            raise CapacityError("simplex pivot budget exhausted")
        j = next((j for j in range(allowed) if obj[j] < 0), None)
        if j is None:
            return OPTIMAL
        best, r = None, None
        for i, row in enumerate(T):
            a = row[j]
            if a > 0:
                ratio = row[-1] / a if isinstance(a, Fraction) or isinstance(row[-1], Fraction) \
                    else Fraction(row[-1], a)
                if best is None or ratio < best or (ratio == best and basis[i] < basis[r]):
                    best, r = ratio, i
        if r is None:
            return UNBOUNDED
        _pivot(T, [obj], basis, r, j)
        if log is not None:
            log.append(frozenset(basis))


def _pivot(T, objs, basis, r, j):
    prow = T[r]
    piv = prow[j]
    if piv != 1:
        inv = _ONE / piv
        prow = [v * inv if v else 0 for v in prow]
        T[r] = prow
    nz = [k for k, v in enumerate(prow) if v]
    for i, row in enumerate(T):
        if i != r:
            f = row[j]
            if f:
                for k in nz:
                    row[k] -= f * prow[k]
    for obj in objs:
        f = obj[j]
        if f:
            for k in nz:
                obj[k] -= f * prow[k]
    basis[r] = j


# -- inequality-form LP ----------------------------------------------------------

def _dedupe(le_rows):
    """Keep the tightest rhs per coefficient vector; drop zero rows.

    Returns (kept rows, infeasible flag).
    """
    best = {}
    for k, (vec, rhs, tag, sign) in enumerate(le_rows):
        key = tuple(vec)
        if not any(key):
            if rhs < 0:
                return None, True
            continue
        if key not in best or rhs < best[key][1]:
            best[key] = (vec, rhs, k)
    return sorted(best.values(), key=lambda t: t[2]), False


def solve(lp, objective=None):
    """Solve ``max objective.x`` over ``lp``; returns an ``LPResult``."""
    n = len(lp.variables)
    obj = lp.objective if objective is None else dict(lp._check_coeffs(objective))
    c = [0] * n
    for var, v in obj.items():
        c[lp.index[var]] = v
    rows = lp.le_rows()
    kept, infeasible = _dedupe(rows)
    if infeasible:
        return LPResult(INFEASIBLE)

    if n == 0:
        return LPResult(OPTIMAL, point_at(lp, []), 0, {})
    A = [[vec[i] for vec, _, _ in kept] for i in range(n)]  # A^T: n x m
    b = [rhs for _, rhs, _ in kept]
    if not kept:
        if any(c):
            return LPResult(UNBOUNDED)
        x = [0] * n
        return LPResult(OPTIMAL, point_at(lp, x), 0, {})
    res = solve_standard(A, c, b)
    if res.status == OPTIMAL:
        x = res.multipliers
        duals = {}
        for (vec, rhs, k), zk in zip(kept, res.z):
            if zk:
                tag, sign = rows[k][2], rows[k][3]
                duals[tag] = duals.get(tag, 0) + sign * zk
        return LPResult(OPTIMAL, point_at(lp, x), _dot(c, x), duals)
    if res.status == UNBOUNDED:
        return LPResult(INFEASIBLE)
    # dual infeasible: primal is infeasible or unbounded
    feas = solve_standard(A, [0] * n, b)
    if feas.status == UNBOUNDED:
        return LPResult(INFEASIBLE)
    return LPResult(UNBOUNDED)


def point_at(lp, x, rows=None):
    x = tuple(Fraction(v) for v in x)
    rows = lp.rows if rows is None else rows
    tight, vecs = [], []
    for row in rows:
        vec = lp.dense(row.coeffs)
        if _dot(vec, x) == row.rhs:
            tight.append(row.tag)
            vecs.append(vec)
    return VertexPoint(lp.variables, x, frozenset(tight), rank(vecs) if vecs else 0)


def verify_point(lp, point):
    """Exact substitution of ``point`` into every row."""
    return lp.satisfied(point.values)


class LexStageError(DomainError):
    def __init__(self, status, stage, variable):
        super().__init__(f"lexicographic stage {stage} ({variable!r}) is {status}")
        self.status = status
        self.stage = stage
        self.variable = variable


def lex_maximize(lp, order=None):
    """Lexicographically maximal point: maximise each variable of ``order`` in
    turn, fixing the optimum before moving on."""
    order = list(lp.variables if order is None else order)
    work = lp.copy()
    res = None
    for stage, var in enumerate(order):
        res = solve(work, {var: 1})
        if res.status != OPTIMAL:
            raise LexStageError(res.status, stage, var)
        work.add_row({var: 1}, "=", res.value, tag=("__lex__", stage))
    if res is None:
        res = solve(work, {})
        if res.status != OPTIMAL:
            raise LexStageError(res.status, 0, None)
    return point_at(lp, res.point.values)


def is_integral(point):
    values = point.values if isinstance(point, VertexPoint) else point
    return all(Fraction(v).denominator == 1 for v in values)


# -- faces and vertices ------------------------------------------------------------

def to_minimal_face(lp, x, extra=()):
    """Move ``x`` inside its face until the tight rows span the row space.

    ``extra`` holds additional ``(vec, rhs)`` equalities that must stay
    tight (an objective level, say).  Returns the new point and the indices
    of the ``<=`` rows tight there.
    """
    rows = lp.le_rows()
    vecs = [r[0] for r in rows]
    full_rank = rank(vecs + [list(v) for v, _ in extra]) if (vecs or extra) else 0
    x = list(x)
    while True:
        tight = [k for k, (vec, rhs, _, _) in enumerate(rows) if _dot(vec, x) == rhs]
        span = [vecs[k] for k in tight] + [list(v) for v, _ in extra]
        if (rank(span) if span else 0) == full_rank:
            return tuple(x), tight
        d = None
        for cand in nullspace(span, len(x)):
            if any(_dot(v, cand) for v in vecs):
                d = cand
                break
        if d is None:  # pragma: no cover - rank bookkeeping guarantees a direction
            raise InternalInvariantError("no improving direction")
        step, hit = None, None
        for sgn in (1, -1):
            dd = [sgn * v for v in d]
            for k, (vec, rhs, _, _) in enumerate(rows):
                ad = _dot(vec, dd)
                if ad > 0:
                    t = (rhs - _dot(vec, x)) / Fraction(ad)
                    if step is None or t < step:
                        step, hit = t, dd
            if step is not None:
                break
        x = [xi + step * di for xi, di in zip(x, hit)]


def integral_point_on_minimal_face(lp, x, extra=()):
    """An integral point of the minimal face containing (a shift of) ``x``,
    or ``None`` if that face has no integral point."""
    y, tight = to_minimal_face(lp, x, extra)
    rows = lp.le_rows()
    eq = [rows[k][0] for k in tight] + [list(v) for v, _ in extra]
    rhs = [rows[k][1] for k in tight] + [r for _, r in extra]
    if not eq:
        return tuple(0 for _ in y)
    sol = integer_solution(eq, rhs)
    if sol is None:
        return None
    if not lp.satisfied(sol):  # pragma: no cover - affine hull of a minimal face is the face
        raise InternalInvariantError("integral point escaped the minimal face")
    return sol


def enumerate_vertices(lp, max_vars=12, max_rows=40, max_bases=200_000):
    """All vertices, found by walking the graph of feasible bases.

    Only min-ratio exchanges are followed.  Those are exactly simplex
    pivots, and a simplex run aimed at any vertex moves along them, so every
    vertex is reached.
    """
    n = len(lp.variables)
    rows = lp.le_rows()
    if n > max_vars:
        raise CapacityError(f"{n} variables exceed the vertex-enumeration cap {max_vars}")
    if len(lp.rows) > max_rows:
        raise CapacityError(f"{len(lp.rows)} rows exceed the vertex-enumeration cap {max_rows}")
    start = solve(lp, {})
    if start.status != OPTIMAL:
        return []
    x, tight = to_minimal_face(lp, start.point.values)
    vecs = [r[0] for r in rows]
    if rank(vecs) < n if vecs else n > 0:
        return []  # region contains a line
    basis = []
    for k in tight:
        if rank([vecs[i] for i in basis + [k]]) == len(basis) + 1:
            basis.append(k)
        if len(basis) == n:
            break
    seen = {tuple(sorted(basis))}
    queue = [tuple(sorted(basis))]
    found = {}
    while queue:
        B = queue.pop()
        inv = inverse([vecs[k] for k in B])
        xb = [sum(inv[i][j] * rows[B[j]][1] for j in range(n)) for i in range(n)]
        found.setdefault(tuple(xb), None)
        for p, r in enumerate(B):
            d = [-inv[i][p] for i in range(n)]
            step, enter = None, []
            for s, (vec, rhs, _, _) in enumerate(rows):
                if s in B:
                    continue
                ad = _dot(vec, d)
                if ad > 0:
                    t = (rhs - _dot(vec, xb)) / Fraction(ad)
                    if step is None or t < step:
                        step, enter = t, [s]
                    elif t == step:
                        enter.append(s)
            for s in enter:
                nb = tuple(sorted([k for k in B if k != r] + [s]))
                if nb not in seen:
                    seen.add(nb)
                    if len(seen) > max_bases:
                        raise CapacityError("too many feasible bases")
                    queue.append(nb)
    return [point_at(lp, v) for v in sorted(found)]
