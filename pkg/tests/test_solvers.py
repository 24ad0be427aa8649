from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import BITRIANGLE, CYCLE3, SINGLE, digraphs
from subflow.errors import (
    ConnectivityTooLow,
    HypothesisViolated,
    InputError,
    NotTU,
    ObjectiveNotRealizable,
    PreconditionViolated,
)
from subflow.generators import (
    hypothesis_digraph,
    make_rng,
    min_dicut_digraph,
    random_crossing_family,
    random_ec,
    random_oracle,
    random_weakly_connected,
)
from subflow.graph import (
    Digraph,
    cut_degrees,
    edge_connectivity_underlying,
    flip,
    is_k_arc_connected,
    is_k_dijoin,
    is_k_flip,
    is_near_eulerian,
    members,
    proper_subsets,
)
from subflow.lp import INFEASIBLE
from subflow.oracles import brute_force_flip, brute_force_two_systems, flip_masks, pairwise_sum_system
from subflow.setfam import (
    all_proper,
    ceil_half_imbalance,
    constant,
    dicut_slack,
    empty_family,
    outdeg_minus_k,
    singletons_and_complements,
    SubmodularOracle,
    table_oracle,
)
from subflow.solvers import (
    INTEGRAL,
    VIOLATING_SET,
    TUInstance,
    TwoSystemInstance,
    balanced_cut_condition,
    cut_condition_violation,
    decompose_flip_dijoin,
    dicut_minimum,
    dijoin_pair_decompose,
    find_k_flip,
    hypothesis_lhs,
    near_eulerian_flip,
    potentials,
    solve_tu_generalization,
    solve_two_systems,
    verify_hypothesis,
    verify_weighted_hypothesis,
    weighted_decompose,
)
from subflow.transshipment import cut_capacity
from subflow.tu import incidence_matrix

PATH3 = Digraph(3, ((0, 1), (1, 2)))


def brute_hypothesis(d, tau, k):
    for U in proper_subsets(d.n):
        dout, din = cut_degrees(d, U)
        if hypothesis_lhs(dout, din, tau, k) < tau:
            return False
    return True


# -- potentials ---------------------------------------------------------------------

def test_potentials_on_a_path():
    w = potentials(PATH3, (2, -1))
    assert w[0] - w[1] == 2 and w[1] - w[2] == -1
    assert w[0] == 0


def test_potentials_roots_every_component():
    d = Digraph(4, ((0, 1), (2, 3)))
    assert potentials(d, (1, 5)) == (0, -1, 0, -5)


def test_potentials_reject_a_cycle_with_nonzero_sum():
    with pytest.raises(ObjectiveNotRealizable) as exc:
        potentials(CYCLE3, (1, 0, 0))
    # the cycle sum is 1, so whichever arc closes the cycle is off by one
    assert exc.value.witness in (0, 1, 2)
    assert abs(exc.value.slack) == 1


@given(digraphs(max_n=5, max_arcs=8), st.lists(st.integers(-3, 3), min_size=5, max_size=5))
def test_potential_differences_round_trip(d, w):
    c = tuple(w[t] - w[h] for t, h in d.arcs)
    p = potentials(d, c)
    assert all(p[t] - p[h] == x for (t, h), x in zip(d.arcs, c))


# -- two systems --------------------------------------------------------------------

def test_pairwise_example_fails_the_precondition():
    inst = pairwise_sum_system()
    with pytest.raises(PreconditionViolated) as exc:
        solve_two_systems(inst)
    assert exc.value.witness is not None


def test_cycle_with_outdegree_system_gives_a_one_flip():
    d = CYCLE3
    inst = TwoSystemInstance(d, dicut_slack(d, 1), outdeg_minus_k(d, 1), (0,) * 3, (1,) * 3)
    res = solve_two_systems(inst)
    assert res.status == INTEGRAL
    J = frozenset(a for a, v in enumerate(res.y) if v)
    assert is_k_flip(d, J, 1)
    feasible = brute_force_two_systems(d, inst.f1, inst.f2, (0, 1))
    assert res.y in feasible
    # only the empty set and the full reversal keep the cycle strongly connected
    assert sorted(feasible) == [(0, 0, 0), (1, 1, 1)]


def test_empty_families_give_zero_on_a_connected_digraph():
    d = PATH3
    inst = TwoSystemInstance(d, constant(empty_family(3), 0), constant(empty_family(3), 0),
                             (-2, 0), (1, 3))
    res = solve_two_systems(inst)
    assert res.status == INTEGRAL and res.y == (0, 0)


def test_empty_families_on_a_disconnected_digraph_violate_the_precondition():
    d = Digraph(3, ((0, 1),))
    inst = TwoSystemInstance(d, constant(empty_family(3), 0), constant(empty_family(3), 0))
    with pytest.raises(PreconditionViolated):
        solve_two_systems(inst)


def test_violating_set_for_too_tight_bounds():
    # f(U) = -1 on {1} forces y into 1 >= 1, but the arc is capped at 0
    d = SINGLE
    f = constant(all_proper(2), -1)
    inst = TwoSystemInstance(d, f, f, (0,), (0,))
    res = solve_two_systems(inst)
    assert res.status in (VIOLATING_SET, INFEASIBLE)
    assert brute_force_two_systems(d, f, f, (0,)) == []


def test_violating_set_carries_its_excess():
    d = SINGLE
    fam = singletons_and_complements(2)
    # y(0->1) must be >= 2 by the {1} row, bounds cap it at 1
    f = table_oracle(fam, {1: 5, 2: -2})
    inst = TwoSystemInstance(d, f, f, (0,), (1,))
    res = solve_two_systems(inst)
    assert res.status == VIOLATING_SET
    U = res.violating_set
    cap = cut_capacity(d, inst.lower, inst.upper, U)
    assert sum(res.base_point[v] for v in members(U)) - cap == res.excess > 0
    assert cut_condition_violation(inst) is not None


def test_bounds_must_be_ordered():
    with pytest.raises(InputError):
        TwoSystemInstance(SINGLE, constant(empty_family(2), 0), constant(empty_family(2), 0),
                          (1,), (0,))


def _random_two_system(rng):
    n = rng.randint(2, 4)
    d = random_weakly_connected(n, rng.randint(0, 5 - (n - 1)), rng)
    f1, f2 = (random_oracle(random_crossing_family(n, rng, rng.randint(1, 3)), rng)
              for _ in range(2))
    lower = tuple(rng.choice((-1, 0)) for _ in range(d.m))
    upper = tuple(rng.choice((0, 1)) for _ in range(d.m))
    return TwoSystemInstance(d, f1, f2, lower, upper)


@pytest.mark.parametrize("seed", range(8))
def test_random_instances_agree_with_enumeration(seed):
    rng = make_rng(100 + seed)
    for _ in range(25):
        inst = _random_two_system(rng)
        d = inst.d
        brute = [y for y in brute_force_two_systems(d, inst.f1, inst.f2, (-1, 0, 1))
                 if all(lo <= v <= hi for v, lo, hi in zip(y, inst.lower, inst.upper))]
        res = solve_two_systems(inst)
        if res.status == INTEGRAL:
            assert res.y in brute
        elif res.status == VIOLATING_SET:
            U = res.violating_set
            cap = cut_capacity(d, inst.lower, inst.upper, U)
            assert sum(res.base_point[v] for v in members(U)) - cap == res.excess > 0
        else:
            assert res.status == INFEASIBLE and brute == []
        # under the cut condition an integral point exists whenever P is non-empty
        if cut_condition_violation(inst) is None and res.status != INFEASIBLE:
            assert res.status == INTEGRAL
        if brute == [] and res.status == INTEGRAL:
            pytest.fail("solver found a point enumeration missed")


def _capacity_oracle(d, lower, upper):
    # u(out) - l(in) is submodular when l <= u, so the cut condition holds by design
    return SubmodularOracle(all_proper(d.n), lambda U: cut_capacity(d, lower, upper, U), "cap")


@pytest.mark.parametrize("seed", range(6))
def test_capacity_system_always_yields_a_point(seed):
    rng = make_rng(150 + seed)
    integral = 0
    for _ in range(20):
        base = _random_two_system(rng)
        f2 = _capacity_oracle(base.d, base.lower, base.upper)
        inst = TwoSystemInstance(base.d, base.f1, f2, base.lower, base.upper)
        assert cut_condition_violation(inst) is None
        res = solve_two_systems(inst)
        brute = [y for y in brute_force_two_systems(inst.d, inst.f1, f2, (-1, 0, 1))
                 if all(lo <= v <= hi for v, lo, hi in zip(y, inst.lower, inst.upper))]
        if res.status == INFEASIBLE:
            assert brute == []
        else:
            assert res.status == INTEGRAL and res.y in brute
            integral += 1
    assert integral > 0


def test_objective_face_on_the_path():
    # c = (1, 1) rewards pushing along both arcs; the face sits on the f bounds
    d = PATH3
    f = outdeg_minus_k(d, 0)
    inst = TwoSystemInstance(d, f, f, (-3, -3), (3, 3), objective=(1, 1))
    res = solve_two_systems(inst)
    assert res.status == INTEGRAL
    assert res.y == (1, 1)


def test_objective_on_a_cycle_is_not_realizable():
    f = outdeg_minus_k(CYCLE3, 1)
    inst = TwoSystemInstance(CYCLE3, f, f, (0,) * 3, (1,) * 3, objective=(1, 0, 0))
    with pytest.raises(ObjectiveNotRealizable):
        solve_two_systems(inst)


# -- TU generalization --------------------------------------------------------------

def test_zero_column_with_empty_families_returns_zero():
    M = ((1, 0), (-1, 0))
    inst = TUInstance(M, constant(empty_family(2), 0), constant(empty_family(2), 0))
    res = solve_tu_generalization(inst)
    assert res.status == INTEGRAL and res.y == (0, 0)


def test_determinant_two_minor_is_rejected():
    M = ((1, 1), (-1, 1), (0, -1), (0, -1))
    inst = TUInstance(M, constant(empty_family(4), 0), constant(empty_family(4), 0))
    with pytest.raises(NotTU):
        solve_tu_generalization(inst)


def test_columns_must_sum_to_zero():
    with pytest.raises(InputError):
        TUInstance(((1,), (0,)), constant(empty_family(2), 0), constant(empty_family(2), 0))


@pytest.mark.parametrize("seed", range(5))
def test_incidence_matrix_reproduces_the_digraph_solver(seed):
    rng = make_rng(200 + seed)
    for _ in range(10):
        inst = _random_two_system(rng)
        tu = TUInstance(incidence_matrix(inst.d), inst.f1, inst.f2, inst.lower, inst.upper)
        a, b = solve_two_systems(inst), solve_tu_generalization(tu)
        assert a.status == b.status
        if a.status == INTEGRAL:
            assert a.base_point == b.base_point


# -- hypothesis ---------------------------------------------------------------------

def test_hypothesis_holds_on_the_cycle():
    assert verify_hypothesis(CYCLE3, 2, 1).ok


def test_hypothesis_fails_on_a_single_arc():
    rep = verify_hypothesis(SINGLE, 2, 1)
    assert not rep.ok
    assert rep.violating_set == 0b10
    assert rep.slack == -1


def test_hypothesis_holds_on_the_bitriangle():
    assert verify_hypothesis(BITRIANGLE, 4, 2).ok


def test_hypothesis_slack_is_exact():
    # path 0->1->2, tau=3, k=2: U={2} has d+=0, d-=1 so lhs = 1/2
    rep = verify_hypothesis(PATH3, 3, 2)
    assert not rep.ok
    dout, din = cut_degrees(PATH3, rep.violating_set)
    assert rep.slack == hypothesis_lhs(dout, din, 3, 2) - 3
    assert rep.slack < 0 and isinstance(rep.slack, Fraction)


@given(digraphs(max_n=5, max_arcs=9), st.integers(1, 4), st.integers(1, 3))
def test_hypothesis_matches_enumeration(d, tau, k):
    rep = verify_hypothesis(d, tau, k)
    assert rep.ok == brute_hypothesis(d, tau, k)
    if not rep.ok:
        dout, din = cut_degrees(d, rep.violating_set)
        assert hypothesis_lhs(dout, din, tau, k) - tau == rep.slack < 0


@given(digraphs(max_n=5, max_arcs=9), st.integers(1, 3))
def test_hypothesis_implies_2k_edge_connectivity(d, k):
    if verify_hypothesis(d, 2 * k, k).ok:
        assert edge_connectivity_underlying(d) >= 2 * k


@given(digraphs(max_n=5, max_arcs=9), st.integers(2, 5))
def test_weighted_hypothesis_with_unit_weights_matches(d, tau):
    assert verify_weighted_hypothesis(d, (1,) * d.m, tau, 1).ok == verify_hypothesis(d, tau, 1).ok


# -- flips --------------------------------------------------------------------------

def test_cycle_flip_without_family():
    cert = find_k_flip(CYCLE3, 2, 1)
    assert cert.k_flip and cert.family_ok
    assert is_k_arc_connected(flip(CYCLE3, cert.J), 1)


def test_flip_rejects_a_violated_hypothesis():
    with pytest.raises(HypothesisViolated) as exc:
        find_k_flip(SINGLE, 2, 1)
    assert exc.value.witness == 0b10 and exc.value.slack == -1


def test_flip_rejects_f_below_the_lower_bound():
    f = constant(all_proper(3), -1)
    with pytest.raises(HypothesisViolated) as exc:
        find_k_flip(CYCLE3, 2, 1, f)
    assert exc.value.slack < 0


@pytest.mark.parametrize("seed", range(10))
def test_flip_agrees_with_exhaustive_search(seed):
    rng = make_rng(300 + seed)
    n = rng.randint(2, 5)
    k = rng.randint(1, 2)
    tau = rng.randint(k + 1, 2 * k + 1)
    d = hypothesis_digraph(n, tau, k, rng, max_arcs=12)
    f = dicut_slack(d, tau - k)
    cert = find_k_flip(d, tau, k, f)
    valid = {frozenset(members(int(J))) for J in flip_masks(d, k, f)}
    assert cert.J in valid
    assert brute_force_flip(d, k, f) is not None
    assert is_k_dijoin(d, cert.J, k)


def test_flip_complement_is_a_flip():
    rng = make_rng(11)
    d = hypothesis_digraph(4, 4, 2, rng)
    res = decompose_flip_dijoin(d, 4, 2)
    assert is_k_flip(d, res.part2, 2)


# -- near-Eulerian orientations ----------------------------------------------------

def test_near_eulerian_on_the_cycle():
    cert = near_eulerian_flip(CYCLE3, 1)
    assert cert.near_eulerian
    assert is_near_eulerian(flip(CYCLE3, cert.J))


def test_near_eulerian_repairs_a_reversed_arc():
    d = Digraph(3, ((0, 1), (1, 2), (0, 2)))
    cert = near_eulerian_flip(d, 1)
    flipped = flip(d, cert.J)
    assert is_k_arc_connected(flipped, 1) and is_near_eulerian(flipped)
    assert cert.J in ({2}, {0, 1})


def test_near_eulerian_on_the_bitriangle():
    cert = near_eulerian_flip(BITRIANGLE, 2)
    flipped = flip(BITRIANGLE, cert.J)
    assert is_k_arc_connected(flipped, 2) and is_near_eulerian(flipped)


def test_near_eulerian_needs_connectivity():
    with pytest.raises(ConnectivityTooLow) as exc:
        near_eulerian_flip(PATH3, 1)
    assert exc.value.slack == -1


@pytest.mark.parametrize("seed", range(6))
def test_near_eulerian_matches_exhaustive_search(seed):
    rng = make_rng(400 + seed)
    d = random_ec(rng.randint(3, 5), 2, rng, simple=False, max_arcs=9)
    cert = near_eulerian_flip(d, 1)
    valid = {frozenset(members(int(J))) for J in flip_masks(d, 1, ceil_half_imbalance(d))}
    assert cert.J in valid


# -- decompositions -----------------------------------------------------------------

def test_bitriangle_decomposes():
    res = decompose_flip_dijoin(BITRIANGLE, 4, 2)
    assert res.verified
    assert res.part1 | res.part2 == frozenset(range(6))
    assert not res.part1 & res.part2


def test_decompose_rejects_bad_split():
    with pytest.raises(InputError):
        decompose_flip_dijoin(BITRIANGLE, 2, 2)


@pytest.mark.parametrize("seed", range(6))
def test_dicut_and_dijoin_decomposition(seed):
    # dicuts of size >= tau and a mixed cut elsewhere give the k = 1 hypothesis
    rng = make_rng(500 + seed)
    tau = rng.randint(2, 3)
    d = min_dicut_digraph(rng.randint(3, 5), tau, rng, max_arcs=14)
    for U in proper_subsets(d.n):
        dout, din = cut_degrees(d, U)
        if dout and din:
            assert dout + (tau - 1) * din >= tau
    assert dicut_minimum(d) is None or dicut_minimum(d) >= tau
    if not verify_hypothesis(d, tau, 1).ok:
        # a set with no arc at all in one direction but the other side empty too
        pytest.skip("disconnected instance")
    res = decompose_flip_dijoin(d, tau, 1)
    assert is_k_dijoin(d, res.part1, 1) and is_k_dijoin(d, res.part2, tau - 1)


@pytest.mark.parametrize("tau", [2, 3, 4])
def test_edge_connected_instances_satisfy_the_hypothesis(tau):
    rng = make_rng(600 + tau)
    for _ in range(5):
        d = random_ec(rng.randint(3, 5), tau, rng, simple=False, max_arcs=14)
        for k in range(1, tau // 2 + 1):
            assert balanced_cut_condition(d, tau)[0]
            assert verify_hypothesis(d, tau, k).ok
            assert decompose_flip_dijoin(d, tau, k).verified


def test_balanced_cut_condition_witness():
    ok, U = balanced_cut_condition(SINGLE, 2)
    assert not ok and U in (1, 2)
    # bidirected triangle: cuts of size 4 and no dicuts
    assert balanced_cut_condition(BITRIANGLE, 5)[0]
    assert not balanced_cut_condition(BITRIANGLE, 6)[0]


@pytest.mark.parametrize("seed", range(5))
def test_unit_weights_match_the_plain_decomposition(seed):
    rng = make_rng(700 + seed)
    d = hypothesis_digraph(rng.randint(2, 5), 3, 1, rng, max_arcs=12)
    plain = decompose_flip_dijoin(d, 3, 1)
    weighted = weighted_decompose(d, (1,) * d.m, 3, 1)
    assert weighted.part1 == plain.part1 and weighted.part2 == plain.part2


def test_weighted_decomposition_ignores_zero_arcs():
    # bidirected triangle carries the weight; an extra weight-0 arc adds a cut direction
    d = Digraph(3, BITRIANGLE.arcs + ((0, 1),))
    res = weighted_decompose(d, (1,) * 6 + (0,), 4, 2)
    assert res.verified
    assert 6 not in res.part1 | res.part2


def test_weighted_rejects_non_binary_weights():
    with pytest.raises(InputError):
        weighted_decompose(BITRIANGLE, (2,) * 6, 4, 2)


def test_weighted_hypothesis_failure_has_a_witness():
    with pytest.raises(HypothesisViolated) as exc:
        weighted_decompose(BITRIANGLE, (1, 1, 1, 1, 0, 0), 4, 2)
    assert exc.value.slack < 0


def test_bitriangle_dijoin_pair():
    res = dijoin_pair_decompose(BITRIANGLE, 4, 2)
    assert res.roles == ("2-dijoin", "2-dijoin")
    assert res.verified


@pytest.mark.parametrize("seed", range(4))
def test_dijoin_pair_role_swap(seed):
    rng = make_rng(800 + seed)
    d = random_ec(rng.randint(4, 5), 3, rng)
    a = dijoin_pair_decompose(d, 3, 1)
    b = dijoin_pair_decompose(d, 3, 2)
    assert is_k_dijoin(d, a.part1, 1) and is_k_dijoin(d, a.part2, 2)
    assert is_k_dijoin(d, b.part1, 2) and is_k_dijoin(d, b.part2, 1)
    assert (a.part1, a.part2) == (b.part2, b.part1)


def test_dijoin_pair_needs_connectivity():
    with pytest.raises(ConnectivityTooLow):
        dijoin_pair_decompose(CYCLE3, 3, 1)


def test_dicut_minimum():
    assert dicut_minimum(CYCLE3) is None
    assert dicut_minimum(PATH3) == 1
