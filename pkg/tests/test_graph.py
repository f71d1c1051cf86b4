import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vog.graph import (Graph, ParseError, VogError, degrees, induced_subgraph, load_edge_list,
                       write_edge_list)


def triangle():
    return Graph.from_edges([0, 1, 2], [1, 2, 0], 3)


def test_loader_drops_loops_and_duplicates():
    g = load_edge_list("1 2\n2 1\n3 3\n")
    assert g.n == 2 and g.m == 1
    assert set(g.labels) == {"1", "2"}


def test_loader_keeps_loop_nodes_on_request():
    g = load_edge_list("1 2\n2 1\n3 3\n", keep_loop_nodes=True)
    assert g.n == 3 and g.m == 1
    assert g.degree[g.label_index["3"]] == 0


def test_loader_path():
    g = load_edge_list("a b\nb c\nc d\nd e\n")
    assert (g.n, g.m) == (5, 4)
    assert g.labels == ("a", "b", "c", "d", "e")


def test_loader_comments_and_numeric_base():
    g = load_edge_list("# header\n1 2\n\n2 4\n", base=1)
    assert g.n == 4 and g.m == 2
    assert g.degree.tolist() == [1, 2, 0, 1]


def test_loader_errors_carry_line_numbers():
    with pytest.raises(ParseError, match="line 2"):
        load_edge_list("a b\na b c\n")
    with pytest.raises(ParseError):
        load_edge_list("")
    with pytest.raises(ParseError, match="line 1"):
        load_edge_list("x 1\n", base=0)


def test_induced_subgraph_examples():
    t = triangle()
    assert induced_subgraph(t, [0, 1, 2]).n_edges == 3
    assert induced_subgraph(t, [0]).n_edges == 0
    k5 = Graph.from_edges(*np.triu_indices(5, 1), 5)
    assert induced_subgraph(k5, [0, 2, 4]).n_edges == 3


def test_degree_examples():
    k4 = Graph.from_edges(*np.triu_indices(4, 1), 4)
    assert degrees(induced_subgraph(k4, range(4))).tolist() == [3, 3, 3, 3]
    star = Graph.from_edges([0] * 4, [1, 2, 3, 4], 5)
    assert degrees(induced_subgraph(star, range(5))).tolist() == [4, 1, 1, 1, 1]
    path = Graph.from_edges([0, 1, 2], [1, 2, 3], 4)
    assert degrees(induced_subgraph(path, range(4))).tolist() == [1, 2, 2, 1]


def test_unknown_label_rejected():
    with pytest.raises(VogError, match="zzz"):
        triangle().nodes_for_labels(["0", "zzz"])


edge_lists = st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30)), min_size=1, max_size=120)


@settings(max_examples=60, deadline=None)
@given(edge_lists)
def test_write_reload_round_trip(pairs):
    if all(a == b for a, b in pairs):
        return
    text = "".join(f"n{a} n{b}\n" for a, b in pairs)
    g = load_edge_list(text)
    buf = io.StringIO()
    write_edge_list(g, buf)
    h = load_edge_list(buf.getvalue())
    assert (h.n, h.m) == (g.n, g.m)

    def named(x):
        return {frozenset((x.labels[u], x.labels[v])) for u, v in x.edges()}
    assert named(h) == named(g)
    g.check()


@settings(max_examples=60, deadline=None)
@given(edge_lists, st.data())
def test_induced_subgraph_properties(pairs, data):
    src, dst = zip(*pairs)
    g = Graph.from_edges(src, dst, 31)
    assert induced_subgraph(g, range(g.n)).n_edges == g.m
    nodes = data.draw(st.sets(st.integers(0, 30)))
    sub = induced_subgraph(g, nodes)
    assert degrees(sub).sum() == 2 * sub.n_edges
    brute = sum(1 for u, v in g.edges() if u in nodes and v in nodes)
    assert sub.n_edges == brute
