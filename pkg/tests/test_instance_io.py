import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import digraphs
from subflow.errors import InputError
from subflow.graph import Digraph, members, vset
from subflow.instance_io import (
    FamilySpec,
    FnSpec,
    Instance,
    format_instance,
    parse_instance,
    parse_vector,
)
from subflow.setfam import check_crossing_submodular

SAMPLE = """\
# a small instance with every kind of block
digraph n=4
vertex 0 s
vertex 3 t
arc 0 1
arc 1 2 w=0
arc 2 3
arc 3 0
family F { 0 1 | 0 1 2 }
family L {
  lattice 0 3 min=0 max=0,1,2 order=1<2
}
fn f family=F builder=table
set 0 1 = 2
set 0 1 2 = 1
fn g family=dicuts builder=dicut-slack:1
fn h family=all-proper builder=outdeg-minus:1
fn q family=singletons-complements builder=ceil-half-imbalance
fn c family=L builder=constant:0
"""


def test_sample_parses():
    inst = parse_instance(SAMPLE)
    assert inst.d.n == 4 and inst.d.m == 4
    assert inst.d.weights == (1, 0, 1, 1)
    assert inst.labels == ((0, "s"), (3, "t"))
    f = inst.oracle("f")
    assert f(vset((0, 1))) == 2 and f(vset((0, 1, 2))) == 1
    assert inst.oracle("h")(vset((0,))) == 0
    assert inst.oracle("q")(vset((1,))) == 0
    lat = inst.family("L")
    assert lat.contains(vset((0,))) and lat.contains(vset((0, 1, 2)))
    assert not lat.contains(vset((0, 2)))  # 2 needs 1 first


def test_sample_round_trips():
    inst = parse_instance(SAMPLE)
    again = parse_instance(format_instance(inst))
    assert again.d == inst.d
    assert again.families == inst.families
    assert again.fns == inst.fns
    assert format_instance(again) == format_instance(inst)


@given(digraphs(max_n=6, max_arcs=8), st.data())
def test_generated_round_trip(d, data):
    w = tuple(data.draw(st.integers(0, 1)) for _ in range(d.m))
    d = Digraph(d.n, d.arcs, w)
    sets = tuple(sorted(data.draw(st.sets(st.integers(1, (1 << d.n) - 2), max_size=4))))
    table = tuple((U, data.draw(st.integers(-3, 3))) for U in sets)
    inst = Instance(d, (), (FamilySpec("F", "explicit", sets),), (FnSpec("f", "F", "table", None, table),))
    assert parse_instance(format_instance(inst)) == inst


def test_table_functions_are_checked_by_the_caller():
    # the format stores any table; submodularity is a separate check
    inst = parse_instance("digraph n=4\nfamily F { 0 | 0 1 | 0 2 | 0 1 2 }\n"
                          "fn f family=F builder=table\nset 0 = 0\nset 0 1 = 0\nset 0 2 = 0\nset 0 1 2 = 1\n")
    ok, pair = check_crossing_submodular(inst.oracle("f"))
    assert not ok
    assert sorted(map(members, pair)) == [(0, 1), (0, 2)]


@pytest.mark.parametrize("text, fragment", [
    ("arc 0 1\n", "line 1"),
    ("digraph n=2\narc 0 5\n", "line 2"),
    ("digraph n=2\narc 0 1 w=2\n", "line 2"),
    ("digraph n=2\narc 0 1 colour=red\n", "line 2"),
    ("digraph n=2\nbogus\n", "unknown keyword"),
    ("digraph n=3\nfamily F { 0 1 2 }\n", "line 2"),
    ("digraph n=3\nfamily F { builder nothing }\n", "line 2"),
    ("digraph n=3\nfn f family=all-proper builder=magic\n", "line 2"),
    ("digraph n=3\nfn f family=all-proper builder=table\nset 0 = 1\nset 0 = 2\n", "given twice"),
    ("digraph n=3\nfamily F {\n 0\n", "line"),
    ("digraph n=2\narc 1 1\n", "loops"),
    ("digraph n=3\nfn f family=all-proper builder=table\nset 0 7 = 1\n", "line 3"),
])
def test_bad_input_is_rejected(text, fragment):
    with pytest.raises(InputError) as exc:
        parse_instance(text)
    assert fragment in str(exc.value)


def test_unknown_names():
    inst = parse_instance("digraph n=2\narc 0 1\n")
    with pytest.raises(InputError):
        inst.oracle("f")
    with pytest.raises(InputError):
        inst.family("nope")


def test_parse_vector():
    assert parse_vector("1, -2 3") == (1, -2, 3)
    assert parse_vector("0", 3) == (0, 0, 0)
    assert parse_vector("inf -inf", 2, allow_inf=True) == (float("inf"), float("-inf"))
    with pytest.raises(InputError):
        parse_vector("1 2", 3)
    with pytest.raises(InputError):
        parse_vector("inf", 1)
