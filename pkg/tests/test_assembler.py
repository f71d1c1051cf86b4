import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vog.assembler import (GreedyNForget, Plain, TopK, assemble_greedy_n_forget, assemble_plain,
                           assemble_top_k, parse_heuristics, rank_candidates, read_model,
                           summarize, write_model)
from vog.codec import (Chain, FullBipartite, FullClique, Model, Star, baseline_cost, near_bipartite,
                       near_clique, total_cost)
from vog.decompose import slashburn_decompose
from vog.generators import cavemen, erdos_renyi, planted
from vog.graph import Graph, ParseError, VogError
from vog.labeler import LabeledCandidate, label_candidates


def fake(benefit, nodes):
    return LabeledCandidate(FullClique(nodes), 0.0, benefit, 0.0)


@pytest.fixture(scope="module")
def toy():
    g = cavemen().graph
    return g, label_candidates(g, slashburn_decompose(g))


@pytest.fixture(scope="module")
def noisy():
    g = planted(500, [("fc", 20), ("st", 50), ("fb", 20), ("fc", 10)], 0.01, 1).graph
    return g, label_candidates(g, slashburn_decompose(g, None))


def test_rank_order():
    cs = [fake(5.0, [0, 1]), fake(9.2, [2, 3]), fake(1.1, [4, 5])]
    assert [c.benefit for c in rank_candidates(cs)] == [9.2, 5.0, 1.1]
    assert rank_candidates([]) == []
    ties = [fake(1.0, [5, 6, 7]), fake(1.0, [3, 4]), fake(1.0, [0, 9])]
    assert [c.structure.nodes.tolist() for c in rank_candidates(ties)] == [[0, 9], [3, 4],
                                                                          [5, 6, 7]]


def test_plain_and_top_k_sizes(toy):
    g, cands = toy
    assert len(assemble_plain(g, cands[:3], include_all=True).model) == 3
    plain = assemble_plain(g, [])
    assert len(plain.model) == 0 and plain.report.total_bits == baseline_cost(g)
    beneficial = [c for c in cands if c.beneficial]
    assert len(assemble_top_k(g, cands, 10).model) == min(10, len(beneficial))
    assert len(assemble_top_k(g, cands, 1000).model) == len(beneficial)
    assert assemble_top_k(g, cands, 100).report.total_bits == \
        assemble_plain(g, cands).report.total_bits
    assert assemble_plain(g, cands).report.ratio < 1.0
    with pytest.raises(VogError):
        TopK(0)


def test_gnf_rejects_duplicates(toy):
    g, cands = toy
    best = rank_candidates(cands)[0]
    res = assemble_greedy_n_forget(g, [best, best], ranked=True)
    assert len(res.model) == 1


def test_gnf_trail_and_stability(noisy):
    g, cands = noisy
    res = assemble_greedy_n_forget(g, cands)
    assert all(b <= a for a, b in zip(res.trail, res.trail[1:]))
    assert res.report.total_bits == pytest.approx(res.trail[-1], abs=1e-9)
    assert res.report.total_bits == total_cost(g, res.model).total_bits
    if len(res.model):
        without_last = Model(res.model.structures[:-1])
        assert total_cost(g, without_last).total_bits >= res.report.total_bits - 1e-6


def _both_orders(g, cands):
    desc = rank_candidates(cands)
    down = assemble_greedy_n_forget(g, desc, ranked=True).report.total_bits
    up = assemble_greedy_n_forget(g, desc[::-1], ranked=True).report.total_bits
    return down, up


def test_gnf_descending_beats_ascending(toy):
    down, up = _both_orders(*toy)
    assert down <= up + 1e-9


def test_gnf_order_is_heuristic(noisy):
    # greedy order is not optimal: on this corpus ascending order edges out descending
    down, up = _both_orders(*noisy)
    assert up < down < up * 1.01


def test_summarize_picks_minimum(noisy):
    g, cands = noisy
    hs = [Plain(), TopK(10), TopK(100), GreedyNForget(500)]
    res = summarize(g, cands, hs)
    assert res.report.total_bits == min(r.total_bits for r in res.runs.values())
    assert set(res.runs) == {"plain", "top10", "top100", "gnf"}
    only = summarize(g, cands, [TopK(10)])
    assert only.heuristic == "top10"
    with pytest.raises(VogError):
        summarize(g, cands, [])


def test_summarize_tie_prefers_gnf():
    g = erdos_renyi(60, 0.05, 0)
    res = summarize(g, [], [Plain(), TopK(10), GreedyNForget()])
    assert res.heuristic == "gnf" and res.report.total_bits == baseline_cost(g)


def test_parse_heuristics():
    hs = parse_heuristics("plain, top10,top100,gnf", gnf_cap=7, plain_include_all=True)
    assert hs == [Plain(True), TopK(10), TopK(100), GreedyNForget(7)]
    for bad in ("", "topx", "best"):
        with pytest.raises(VogError):
            parse_heuristics(bad)


def _labelled_graph():
    return Graph.from_edges([0, 0, 0, 1, 4, 5, 6], [1, 2, 3, 2, 5, 6, 7], 9,
                            [f"v{i}" for i in range(9)])


def test_model_file_round_trip():
    g = _labelled_graph()
    model = Model([FullClique([0, 1, 2]), near_clique(g, [0, 1, 2, 3]), FullBipartite([0], [1, 2]),
                   near_bipartite(g, [0, 1], [2, 3]), Star(0, [1, 2, 3]), Chain([7, 4, 6, 5])])
    buf = io.StringIO()
    write_model(model, g, buf, ["a comment"])
    text = buf.getvalue()
    assert "nc v0 v1 v2 v3, 4" in text and "ch v7 v4 v6 v5" in text
    back = read_model(text, g)
    assert [s.signature() for s in back] == [s.signature() for s in model]
    assert total_cost(g, back).total_bits == total_cost(g, model).total_bits


@pytest.mark.parametrize("line, msg", [
    ("xx v0 v1", "unknown structure"),
    ("fc v0 nope", "nope"),
    ("nc v0 v1 v2, 9", "edges"),
    ("st v0 v1, v2", "malformed"),
    ("ch v0 v1 v0", "repeats"),
])
def test_model_file_errors(line, msg):
    with pytest.raises(ParseError, match=msg):
        read_model("fc v0 v1\n" + line + "\n", _labelled_graph())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_gnf_never_above_baseline(seed):
    g = planted(120, [("fc", 8), ("st", 15)], 0.03, seed).graph
    cands = label_candidates(g, slashburn_decompose(g, None), seed)
    res = assemble_greedy_n_forget(g, cands)
    assert res.report.total_bits <= baseline_cost(g) + 1e-9
