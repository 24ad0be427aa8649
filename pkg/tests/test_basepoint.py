import random

import pytest

from conftest import MATCHING3
from subflow.basepoint import (
    BALANCE,
    BaseIntersectionInstance,
    build_lp,
    components,
    integral_base_point,
    isolated_cuts,
)
from subflow.errors import Infeasible, InputError, PreconditionViolated, Unbounded
from subflow.generators import random_crossing_family, random_oracle
from subflow.graph import Digraph, vset
from subflow.lp import is_integral
from subflow.setfam import ExplicitFamily, all_proper, constant, empty_family, table_oracle


def ones(n):
    return constant(all_proper(n), 1)


def feasible(inst, x):
    if sum(x) != 0:
        return False
    for f in (inst.f1, inst.f2):
        for U in f.family.members():
            if sum(x[v] for v in range(inst.n) if U >> v & 1) > f(U):
                return False
    return True


class TestBuildLp:
    def test_two_vertices(self):
        lp = build_lp(BaseIntersectionInstance(2, ones(2), ones(2)))
        assert len(lp.rows) == 5
        assert sorted(r.tag for r in lp.rows if r.tag != BALANCE) == [(1, 1), (1, 2), (2, 1), (2, 2)]

    def test_pairwise_families(self):
        fam1 = ExplicitFamily(6, (vset([0, 1]), vset([0, 1, 2, 3])))
        fam2 = ExplicitFamily(6, (vset([0, 1]), vset([0, 1, 2, 4])))
        lp = build_lp(BaseIntersectionInstance(6, constant(fam1, 1), constant(fam2, 1)))
        assert len(lp.rows) == 5

    def test_empty_families(self):
        lp = build_lp(BaseIntersectionInstance(3, constant(empty_family(3), 0), constant(empty_family(3), 0)))
        assert [r.tag for r in lp.rows] == [BALANCE]

    def test_face_sets_must_be_members(self):
        with pytest.raises(InputError):
            BaseIntersectionInstance(2, ones(2), ones(2), faces1={3})


class TestBasePoint:
    def test_segment_top(self):
        assert integral_base_point(BaseIntersectionInstance(2, ones(2), ones(2))).values == (1, -1)

    def test_segment_endpoint(self):
        f1 = table_oracle(all_proper(2), {1: 0, 2: 1})
        assert integral_base_point(BaseIntersectionInstance(2, f1, ones(2))).values == (0, 0)

    def test_empty_families_balance(self):
        empty = constant(empty_family(3), 0)
        inst = BaseIntersectionInstance(3, empty, empty)
        # the face is the whole hyperplane: no vertex, the origin is returned
        assert integral_base_point(inst).values == (0, 0, 0)

    def test_isolated_components(self):
        d = Digraph(4, ((0, 1), (2, 3)))
        inst = BaseIntersectionInstance(4, ones(4), ones(4))
        with pytest.raises(PreconditionViolated) as info:
            integral_base_point(inst, d=d)
        assert info.value.witness == vset([0, 1])
        assert info.value.slack == 1

    def test_infeasible(self):
        f = table_oracle(all_proper(2), {1: -1, 2: -1})
        with pytest.raises(Infeasible):
            integral_base_point(BaseIntersectionInstance(2, f, f))

    def test_unbounded_objective(self):
        empty = constant(empty_family(2), 0)
        with pytest.raises(Unbounded):
            integral_base_point(BaseIntersectionInstance(2, empty, empty, objective=(1, 0)))

    def test_objective_face(self):
        inst = BaseIntersectionInstance(2, ones(2), ones(2), objective=(0, 1))
        assert integral_base_point(inst).values == (-1, 1)

    def test_tight_face(self):
        f = table_oracle(all_proper(3), {U: 2 for U in range(1, 7)})
        inst = BaseIntersectionInstance(3, f, f, faces1={vset([2])})
        assert integral_base_point(inst).values[2] == 2

    def test_components(self):
        assert components(MATCHING3) == [vset([0, 3]), vset([1, 4]), vset([2, 5])]
        assert len(isolated_cuts(MATCHING3)) == 6


def random_instance(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    fams = [random_crossing_family(n, rng, rng.randint(1, 4)) if rng.random() < 0.6 else all_proper(n)
            for _ in range(2)]
    # shift keeps the balance row satisfiable often enough to be interesting
    return BaseIntersectionInstance(n, *(random_oracle(F, rng, shift=rng.randint(0, 3)) for F in fams)), rng


@pytest.mark.parametrize("block", range(10))
def test_random_base_points_are_integral(block):
    # 500 seeds in blocks of 50; integrality is asserted inside the solver too
    for seed in range(50 * block, 50 * block + 50):
        inst, rng = random_instance(seed)
        try:
            p = integral_base_point(inst)
        except Infeasible:
            continue
        assert is_integral(p) and feasible(inst, p.values)
        order = list(range(inst.n))
        rng.shuffle(order)
        q = integral_base_point(inst, order=order)
        assert is_integral(q) and feasible(inst, q.values)
