from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from subflow.errors import CapacityError, DomainError, InputError
from subflow.lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LexStageError,
    LinearProgram,
    enumerate_vertices,
    fmt,
    integer_solution,
    is_integral,
    lex_maximize,
    rank,
    solve,
    solve_square,
    solve_standard,
    verify_point,
)

F = Fraction


def pairwise_lp(box=True):
    lp = LinearProgram(["a", "b", "c"])
    lp.add_row({"a": 1, "b": 1}, "<=", 1, "ab")
    lp.add_row({"b": 1, "c": 1}, "<=", 1, "bc")
    lp.add_row({"a": 1, "c": 1}, "<=", 1, "ac")
    for v in "abc":
        lp.add_row({v: 1}, ">=", 0, f"{v}>=0")
        if box:
            lp.add_row({v: 1}, "<=", 1, f"{v}<=1")
    return lp


def brute_vertices(lp):
    """Vertices by solving every square subsystem of the rows."""
    rows = lp.le_rows()
    n = len(lp.variables)
    pts = set()
    for pick in combinations(range(len(rows)), n):
        A = [rows[k][0] for k in pick]
        if rank(A) < n:
            continue
        x = solve_square(A, [rows[k][1] for k in pick])
        if lp.satisfied(x):
            pts.add(tuple(F(v) for v in x))
    return sorted(pts)


@st.composite
def bounded_lps(draw, max_vars=3, max_rows=4):
    n = draw(st.integers(1, max_vars))
    lp = LinearProgram(range(n))
    for j in range(n):
        lp.add_row({j: 1}, "<=", draw(st.integers(0, 3)), ("hi", j))
        lp.add_row({j: 1}, ">=", draw(st.integers(-3, 0)), ("lo", j))
    coef = st.integers(-2, 2)
    for i in range(draw(st.integers(0, max_rows))):
        vec = {j: draw(coef) for j in range(n)}
        sense = draw(st.sampled_from(["<=", ">=", "="]))
        lp.add_row(vec, sense, draw(st.integers(-2, 2)), ("r", i))
    obj = {j: draw(coef) for j in range(n)}
    return lp, obj


class TestSolve:
    def test_pairwise_sums(self):
        res = solve(pairwise_lp(box=False), {"a": 1, "b": 1, "c": 1})
        assert res.status == OPTIMAL
        assert res.value == F(3, 2)
        assert res.point.values == (F(1, 2),) * 3

    def test_upper_bound_zero(self):
        lp = LinearProgram(["x"])
        lp.add_row({"x": 1}, "<=", 0, "r")
        res = solve(lp, {"x": 1})
        assert (res.status, res.value, res.duals) == (OPTIMAL, 0, {"r": 1})

    def test_no_rows_unbounded(self):
        assert solve(LinearProgram(["x"]), {"x": 1}).status == UNBOUNDED

    def test_infeasible(self):
        lp = LinearProgram(["x"])
        lp.add_row({"x": 1}, ">=", 2, "lo")
        lp.add_row({"x": 1}, "<=", 1, "hi")
        assert solve(lp, {"x": 1}).status == INFEASIBLE

    def test_infeasible_and_unbounded_direction(self):
        lp = LinearProgram(["x", "y"])
        lp.add_row({"x": 1}, ">=", 2, "lo")
        lp.add_row({"x": 1}, "<=", 1, "hi")
        assert solve(lp, {"y": 1}).status == INFEASIBLE

    def test_duplicate_tags_rejected(self):
        lp = LinearProgram(["x"])
        lp.add_row({"x": 1}, "<=", 1, "r")
        with pytest.raises(InputError):
            lp.add_row({"x": 1}, "<=", 2, "r")

    @given(bounded_lps())
    def test_optimum_matches_vertex_scan(self, case):
        lp, obj = case
        verts = brute_vertices(lp)
        res = solve(lp, obj)
        if not verts:
            assert res.status == INFEASIBLE
            return
        best = max(sum(obj[j] * x[j] for j in obj) for x in verts)
        assert res.status == OPTIMAL
        assert res.value == best
        assert verify_point(lp, res.point)

    @given(bounded_lps())
    def test_strong_duality(self, case):
        lp, obj = case
        res = solve(lp, obj)
        assume(res.status == OPTIMAL)
        rhs = {row.tag: row.rhs for row in lp.rows}
        sense = {row.tag: row.sense for row in lp.rows}
        assert sum(y * rhs[t] for t, y in res.duals.items()) == res.value
        for t, y in res.duals.items():
            if sense[t] == "<=":
                assert y >= 0
            elif sense[t] == ">=":
                assert y <= 0
        # the multipliers reproduce the objective
        for var in lp.variables:
            total = sum(y * dict(row.coeffs).get(var, 0)
                        for row in lp.rows for t, y in res.duals.items() if row.tag == t)
            assert total == obj.get(var, 0)

    @given(bounded_lps(max_vars=4, max_rows=6))
    def test_bland_never_repeats_a_basis(self, case):
        lp, obj = case
        rows = lp.le_rows()
        n = len(lp.variables)
        A = [[vec[i] for vec, _, _, _ in rows] for i in range(n)]
        res = solve_standard(A, [obj.get(j, 0) for j in range(n)], [r[1] for r in rows], log_bases=True)
        assert len(res.pivots) == len(set(res.pivots))

    def test_pivot_budget(self):
        with pytest.raises(CapacityError):
            solve_standard([[1, 1]], [1], [-1, -2], max_pivots=0)


class TestLex:
    def test_line_segment(self):
        lp = LinearProgram(["x", "y"])
        lp.add_row({"x": 1, "y": 1}, "=", 0, "e")
        lp.add_row({"x": 1}, "<=", 1, "a")
        lp.add_row({"y": 1}, "<=", 1, "b")
        p = lex_maximize(lp, ["x", "y"])
        assert p.values == (1, -1)
        assert p.is_vertex

    def test_pairwise_box(self):
        assert lex_maximize(pairwise_lp(), ["a", "b", "c"]).values == (1, 0, 0)

    def test_unbounded_stage(self):
        lp = LinearProgram(["x"])
        lp.add_row({"x": 1}, ">=", 0, "lo")
        with pytest.raises(LexStageError) as info:
            lex_maximize(lp)
        assert info.value.status == UNBOUNDED
        assert isinstance(info.value, DomainError)

    @given(bounded_lps())
    def test_deterministic_vertex(self, case):
        lp, _ = case
        assume(solve(lp, {}).status == OPTIMAL)
        p = lex_maximize(lp)
        assert p == lex_maximize(lp)
        assert p.basis_rank == len(lp.variables)


class TestIntegrality:
    @pytest.mark.parametrize("values, expected", [
        ((F(1, 2),) * 3, False),
        ((1, -1), True),
        ((0, 0, 0), True),
    ])
    def test_examples(self, values, expected):
        assert is_integral(values) is expected

    def test_fmt(self):
        assert fmt(F(1, 2)) == "1/2"
        assert fmt(F(3)) == "3"

    def test_integer_solution(self):
        assert integer_solution([[2, 4]], [6]) is not None
        assert integer_solution([[2, 4]], [3]) is None

    @given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=3),
           st.lists(st.integers(-3, 3), min_size=3, max_size=3))
    def test_integer_solution_solves(self, rows, x):
        rhs = [sum(a * b for a, b in zip(r, x)) for r in rows]
        sol = integer_solution(rows, rhs)
        assert sol is not None
        assert [sum(a * b for a, b in zip(r, sol)) for r in rows] == rhs
        assert all(F(v).denominator == 1 for v in sol)


class TestVertices:
    def test_pairwise_box(self):
        pts = [p.values for p in enumerate_vertices(pairwise_lp())]
        assert (F(1, 2),) * 3 in pts
        assert len(pts) == 5

    def test_unit_square(self):
        lp = LinearProgram(["x", "y"])
        for v in "xy":
            lp.add_row({v: 1}, ">=", 0, f"{v}0")
            lp.add_row({v: 1}, "<=", 1, f"{v}1")
        assert len(enumerate_vertices(lp)) == 4

    def test_line_has_no_vertex(self):
        lp = LinearProgram(["x", "y"])
        lp.add_row({"x": 1, "y": 1}, "=", 0, "e")
        assert enumerate_vertices(lp) == []

    def test_caps(self):
        with pytest.raises(CapacityError):
            enumerate_vertices(LinearProgram(range(13)))

    @given(bounded_lps(max_vars=3, max_rows=5))
    def test_matches_square_subsystems(self, case):
        lp, _ = case
        found = [p.values for p in enumerate_vertices(lp)]
        assert found == brute_vertices(lp)
        for p in enumerate_vertices(lp):
            assert p.basis_rank == len(lp.variables)
