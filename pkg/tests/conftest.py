import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from subflow.graph import Digraph

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def digraphs(draw, min_n=2, max_n=6, max_arcs=10):
    n = draw(st.integers(min_n, max_n))
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
    arcs = draw(st.lists(pair, max_size=max_arcs))
    return Digraph(n, tuple(arcs))


@st.composite
def digraph_and_arcs(draw, **kw):
    d = draw(digraphs(**kw))
    J = draw(st.frozensets(st.integers(0, d.m - 1))) if d.m else frozenset()
    return d, J


@st.composite
def digraph_and_set(draw, **kw):
    d = draw(digraphs(**kw))
    U = draw(st.integers(1, (1 << d.n) - 2))
    return d, U


# small named digraphs used across modules
CYCLE3 = Digraph(3, ((0, 1), (1, 2), (2, 0)))
SINGLE = Digraph(2, ((0, 1),))
BITRIANGLE = Digraph(3, ((0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)))
# three isolated arcs 0->3, 1->4, 2->5
MATCHING3 = Digraph(6, ((0, 3), (1, 4), (2, 5)))
