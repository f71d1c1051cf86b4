"""Summary assembly: choose an ordered subset of labelled candidates."""
from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .codec import (Chain, CostReport, CostTracker, FullBipartite, FullClique, Kind, Model,
                    NearBipartite, NearClique, Star, Structure, count_present, near_bipartite,
                    total_cost)
from .graph import Graph, ParseError, VogError
from .labeler import LabeledCandidate

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Plain:
    include_all: bool = False

    @property
    def name(self) -> str:
        return "plain"


@dataclass(frozen=True)
class TopK:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise VogError("top-k needs k >= 1")

    @property
    def name(self) -> str:
        return f"top{self.k}"


@dataclass(frozen=True)
class GreedyNForget:
    cap: int | None = 500

    def __post_init__(self):
        if self.cap is not None and self.cap < 1:
            raise VogError("greedy cap must be >= 1")

    @property
    def name(self) -> str:
        return "gnf"


Heuristic = Plain | TopK | GreedyNForget

DEFAULT_HEURISTICS = (Plain(), TopK(10), TopK(100), GreedyNForget(500))


def parse_heuristics(names: str, gnf_cap: int | None = 500, plain_include_all: bool = False
                     ) -> list[Heuristic]:
    """Parse ``"plain,top10,top100,gnf"`` style lists."""
    out: list[Heuristic] = []
    for tok in (t.strip().lower() for t in names.split(",")):
        if not tok:
            continue
        if tok == "plain":
            out.append(Plain(plain_include_all))
        elif tok in ("gnf", "greedy", "greedynforget"):
            out.append(GreedyNForget(gnf_cap))
        elif tok.startswith("top") and tok[3:].isdigit():
            out.append(TopK(int(tok[3:])))
        else:
            raise VogError(f"unknown heuristic {tok!r}")
    if not out:
        raise VogError("no heuristics given")
    return out


@dataclass
class SummaryResult:
    model: Model
    report: CostReport
    heuristic: str
    benefits: list[float] = field(default_factory=list)
    trail: list[float] = field(default_factory=list)  # totals after each greedy acceptance
    runs: dict[str, CostReport] = field(default_factory=dict)
    labeled: list[LabeledCandidate] = field(default_factory=list, repr=False)


def rank_candidates(cands: Sequence[LabeledCandidate]) -> list[LabeledCandidate]:
    """Benefit descending; ties by fewer nodes, then lexicographic node set."""
    return sorted(cands, key=lambda c: (-c.benefit, c.structure.size,
                                        tuple(c.structure.all_nodes().tolist())))


def _result(g: Graph, chosen: list[LabeledCandidate], name: str) -> SummaryResult:
    model = Model([c.structure for c in chosen])
    return SummaryResult(model, total_cost(g, model), name, [c.benefit for c in chosen])


def assemble_plain(g: Graph, cands: Sequence[LabeledCandidate], include_all: bool = False
                   ) -> SummaryResult:
    ranked = rank_candidates(cands)
    if not include_all:
        ranked = [c for c in ranked if c.beneficial]
    return _result(g, ranked, "plain")


def assemble_top_k(g: Graph, cands: Sequence[LabeledCandidate], k: int) -> SummaryResult:
    if k < 1:
        raise VogError("top-k needs k >= 1")
    ranked = [c for c in rank_candidates(cands) if c.beneficial]
    return _result(g, ranked[:k], f"top{k}")


def assemble_greedy_n_forget(g: Graph, cands: Sequence[LabeledCandidate],
                             cap: int | None = 500, ranked: bool = False) -> SummaryResult:
    """Add candidates in rank order, keeping each one unless the total grows.

    ``ranked=True`` takes ``cands`` in the given order (used to compare orderings).
    """
    order = list(cands) if ranked else rank_candidates(cands)
    if cap is not None:
        order = order[:cap]
    tracker = CostTracker(g, [c.structure for c in order])
    best = tracker.total()
    trail = [best]
    kept: list[LabeledCandidate] = []
    for i, cand in enumerate(order):
        tracker.add(i)
        new = tracker.total()
        if new <= best:
            best = new
            kept.append(cand)
            trail.append(new)
        else:
            tracker.remove(i)
    model = tracker.model()
    return SummaryResult(model, total_cost(g, model), "gnf", [c.benefit for c in kept], trail)


_TIE_ORDER = {"gnf": 0, "top": 1, "plain": 2}


def _tie_rank(name: str) -> int:
    return _TIE_ORDER["top"] if name.startswith("top") else _TIE_ORDER[name]


def run_heuristic(g: Graph, cands: Sequence[LabeledCandidate], h: Heuristic) -> SummaryResult:
    if isinstance(h, Plain):
        return assemble_plain(g, cands, h.include_all)
    if isinstance(h, TopK):
        return assemble_top_k(g, cands, h.k)
    return assemble_greedy_n_forget(g, cands, h.cap)


def summarize(g: Graph, cands: Sequence[LabeledCandidate],
              heuristics: Iterable[Heuristic] = DEFAULT_HEURISTICS) -> SummaryResult:
    """Run each heuristic and keep the cheapest summary.

    Ties go to Greedy'nForget, then Top-k (smaller k first), then Plain.
    """
    heuristics = list(heuristics)
    if not heuristics:
        raise VogError("no heuristics given")
    results = [run_heuristic(g, cands, h) for h in heuristics]
    for r in results:
        log.info("%s: %d structures, %.1f bits (%.4f of baseline)", r.heuristic, len(r.model),
                 r.report.total_bits, r.report.ratio)
    best = min(results, key=lambda r: (r.report.total_bits, _tie_rank(r.heuristic),
                                       len(r.model)))
    best.runs = {r.heuristic: r.report for r in results}
    return best


# ---------------------------------------------------------------------------
# model file format

def format_structure(s: Structure, g: Graph) -> str:
    lab = g.labels

    def names(ids):
        return " ".join(lab[int(i)] for i in ids)

    if isinstance(s, FullClique):
        return f"fc {names(s.nodes)}"
    if isinstance(s, NearClique):
        return f"nc {names(s.nodes)}, {s.present}"
    if isinstance(s, FullBipartite):
        return f"fb {names(s.a)} , {names(s.b)}"
    if isinstance(s, NearBipartite):
        return f"nb {names(s.a)} , {names(s.b)}"
    if isinstance(s, Star):
        return f"st {lab[s.hub]}, {names(s.spokes)}"
    if isinstance(s, Chain):
        return f"ch {names(s.order)}"
    raise TypeError(type(s))


def write_model(model: Model | Iterable[Structure], g: Graph, dest: IO,
                comments: Sequence[str] | None = None) -> None:
    for c in comments or ():
        dest.write(f"# {c}\n")
    for s in model:
        dest.write(format_structure(s, g) + "\n")


def parse_structure(line: str, g: Graph, lineno: int | None = None) -> Structure:
    kind_tok, _, rest = line.strip().partition(" ")
    try:
        kind = Kind(kind_tok)
    except ValueError:
        raise ParseError(f"unknown structure type {kind_tok!r}", lineno) from None
    parts = [p.split() for p in rest.split(",")]

    def ids(tokens):
        try:
            return g.nodes_for_labels(tokens)
        except VogError as exc:
            raise ParseError(str(exc), lineno) from None

    try:
        if kind is Kind.FC and len(parts) == 1:
            return FullClique(ids(parts[0]))
        if kind is Kind.CH and len(parts) == 1:
            return Chain(ids(parts[0]))
        if kind is Kind.NC and len(parts) == 2:
            nodes = ids(parts[0])
            if len(parts[1]) != 1 or not parts[1][0].isdigit():
                raise ParseError("near-clique needs a present-edge count", lineno)
            proto = FullClique(nodes)
            present = count_present(g, proto.area(g.n))
            if present != int(parts[1][0]):
                raise ParseError(f"near-clique lists {parts[1][0]} edges, graph has {present}",
                                 lineno)
            return NearClique(proto.nodes, present, proto.area_size() - present)
        if kind in (Kind.FB, Kind.NB) and len(parts) == 2:
            a, b = ids(parts[0]), ids(parts[1])
            return FullBipartite(a, b) if kind is Kind.FB else near_bipartite(g, a, b)
        if kind is Kind.ST and len(parts) == 2 and len(parts[0]) == 1:
            return Star(ids(parts[0])[0], ids(parts[1]))
    except ParseError:
        raise
    except VogError as exc:
        raise ParseError(str(exc), lineno) from None
    raise ParseError(f"malformed {kind.value} line", lineno)


def read_model(source: IO | str, g: Graph) -> Model:
    if isinstance(source, str):
        source = io.StringIO(source)
    out = Model()
    for lineno, raw in enumerate(source, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        out.structures.append(parse_structure(line, g, lineno))
    return out


def jaccard(a: np.ndarray, b: np.ndarray) -> float:
    inter = np.intersect1d(a, b).size
    union = np.union1d(a, b).size
    return inter / union if union else 1.0
