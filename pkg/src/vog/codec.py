"""Bit-length accounting for graph summaries.

A model is an ordered list of structures. Each structure claims an *area*
(a set of adjacency cells, i.e. unordered node pairs). Full structures
assert that every cell of their area is an edge; near structures carry
their area verbatim. Whatever the model gets wrong goes to the two error
parts: ``E+`` (modelled cells that are not edges, near areas excluded) and
``E-`` (edges outside every area). All lengths are in bits, base-2 logs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import ClassVar, Iterable, Sequence

import numpy as np

from .graph import Graph, VogError, as_node_set, cell_keys

LOG2_C0 = math.log2(2.865064)


class Kind(str, Enum):
    FC = "fc"
    NC = "nc"
    FB = "fb"
    NB = "nb"
    ST = "st"
    CH = "ch"

    def __str__(self) -> str:
        return self.value


KINDS = tuple(Kind)


# ---------------------------------------------------------------------------
# primitive code lengths

@lru_cache(maxsize=65536)
def universal_int_cost(z: int) -> float:
    """Rissanen's universal code length L_N(z) for integers z >= 1."""
    if z < 1:
        raise ValueError(f"L_N is defined for z >= 1, got {z}")
    bits = LOG2_C0
    x = math.log2(z)
    while x > 0:
        bits += x
        x = math.log2(x)
    return bits


_EXACT_BINOM_LIMIT = 4096


def log_binomial(n: int, k: int) -> float:
    """log2 C(n, k)."""
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"invalid binomial ({n}, {k})")
    if k == 0 or k == n:
        return 0.0
    if n <= _EXACT_BINOM_LIMIT:
        return math.log2(math.comb(n, k))
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / math.log(2)


def log_two_set_choice(n: int, a: int, b: int) -> float:
    """log2 of n! / (a! b! (n-a-b)!): choosing two disjoint node sets."""
    if a < 1 or b < 1 or a + b > n:
        raise ValueError(f"invalid two-set choice ({n}, {a}, {b})")
    return log_binomial(n, a) + log_binomial(n - a, b)


def prefix_code_lengths(ones: int, zeros: int) -> tuple[float, float]:
    """Optimal prefix code lengths (l1, l0) for a 0/1 sequence with these counts.

    A symbol that never occurs gets length 0; it is never transmitted.
    """
    if ones < 0 or zeros < 0 or ones + zeros == 0:
        raise ValueError(f"need a non-empty sequence, got ones={ones} zeros={zeros}")
    total = ones + zeros
    l1 = -math.log2(ones / total) if ones else 0.0
    l0 = -math.log2(zeros / total) if zeros else 0.0
    return l1, l0


def prefix_bits(ones: int, zeros: int) -> float:
    """ones * l1 + zeros * l0, zero for an empty sequence."""
    if ones + zeros == 0:
        return 0.0
    l1, l0 = prefix_code_lengths(ones, zeros)
    return ones * l1 + zeros * l0


def error_part_cost(ones: int, cells: int) -> float:
    """Cost of one error part: count of ones, then the cells by prefix code."""
    if cells == 0:
        return 0.0
    return math.log2(cells) + prefix_bits(ones, cells - ones)


# ---------------------------------------------------------------------------
# structures

def _clique_keys(nodes: np.ndarray, n: int) -> np.ndarray:
    i, j = np.triu_indices(nodes.size, 1)
    return nodes[i] * n + nodes[j]


class Structure:
    """Common surface of the six vocabulary types."""
    kind: ClassVar[Kind]
    exact: ClassVar[bool] = False

    def all_nodes(self) -> np.ndarray:
        raise NotImplementedError

    def area(self, n: int) -> np.ndarray:
        """Cell keys claimed by the structure, without repeats."""
        raise NotImplementedError

    def area_size(self) -> int:
        raise NotImplementedError

    def cost(self, n: int) -> float:
        raise NotImplementedError

    def signature(self) -> tuple:
        raise NotImplementedError

    @property
    def size(self) -> int:
        return int(self.all_nodes().size)

    def _check_range(self, n: int) -> None:
        nodes = self.all_nodes()
        if nodes.size and (nodes.min() < 0 or nodes.max() >= n):
            raise VogError(f"{self.kind} references a node outside 0..{n - 1}")


@dataclass(frozen=True, eq=False)
class FullClique(Structure):
    nodes: np.ndarray
    kind: ClassVar[Kind] = Kind.FC

    def __post_init__(self):
        object.__setattr__(self, "nodes", as_node_set(self.nodes))
        if self.nodes.size < 2:
            raise VogError("a clique needs at least 2 nodes")

    def all_nodes(self):
        return self.nodes

    def area(self, n):
        return _clique_keys(self.nodes, n)

    def area_size(self):
        k = self.nodes.size
        return k * (k - 1) // 2

    def cost(self, n):
        self._check_range(n)
        k = int(self.nodes.size)
        return universal_int_cost(k) + log_binomial(n, k)

    def signature(self):
        return (self.kind.value, tuple(self.nodes.tolist()))


@dataclass(frozen=True, eq=False)
class NearClique(Structure):
    nodes: np.ndarray
    present: int
    absent: int
    kind: ClassVar[Kind] = Kind.NC
    exact: ClassVar[bool] = True

    def __post_init__(self):
        object.__setattr__(self, "nodes", as_node_set(self.nodes))
        if self.nodes.size < 2:
            raise VogError("a near-clique needs at least 2 nodes")
        if self.present < 0 or self.absent < 0 or self.present + self.absent != self.area_size():
            raise VogError("near-clique edge counts do not match its area")

    all_nodes = FullClique.all_nodes
    area = FullClique.area
    area_size = FullClique.area_size

    def cost(self, n):
        self._check_range(n)
        k = int(self.nodes.size)
        return (universal_int_cost(k) + log_binomial(n, k) + math.log2(self.area_size())
                + prefix_bits(self.present, self.absent))

    def signature(self):
        return (self.kind.value, tuple(self.nodes.tolist()))


@dataclass(frozen=True, eq=False)
class FullBipartite(Structure):
    a: np.ndarray
    b: np.ndarray
    kind: ClassVar[Kind] = Kind.FB

    def __post_init__(self):
        object.__setattr__(self, "a", as_node_set(self.a))
        object.__setattr__(self, "b", as_node_set(self.b))
        if self.a.size == 0 or self.b.size == 0:
            raise VogError("bipartite node sets must be non-empty")
        if np.intersect1d(self.a, self.b).size:
            raise VogError("bipartite node sets must be disjoint")

    def all_nodes(self):
        return np.union1d(self.a, self.b)

    def area(self, n):
        aa, bb = np.meshgrid(self.a, self.b, indexing="ij")
        return cell_keys(aa.ravel(), bb.ravel(), n)

    def area_size(self):
        return int(self.a.size * self.b.size)

    def cost(self, n):
        self._check_range(n)
        na, nb = int(self.a.size), int(self.b.size)
        return universal_int_cost(na) + universal_int_cost(nb) + log_two_set_choice(n, na, nb)

    def signature(self):
        sides = sorted([tuple(self.a.tolist()), tuple(self.b.tolist())])
        return (self.kind.value, *sides)


@dataclass(frozen=True, eq=False)
class NearBipartite(Structure):
    a: np.ndarray
    b: np.ndarray
    present: int
    absent: int
    kind: ClassVar[Kind] = Kind.NB
    exact: ClassVar[bool] = True

    def __post_init__(self):
        FullBipartite.__post_init__(self)
        if self.present < 0 or self.absent < 0 or self.present + self.absent != self.area_size():
            raise VogError("near-bipartite edge counts do not match its area")

    all_nodes = FullBipartite.all_nodes
    area = FullBipartite.area
    area_size = FullBipartite.area_size
    signature = FullBipartite.signature

    def cost(self, n):
        base = FullBipartite.cost(self, n)
        return base + math.log2(self.area_size()) + prefix_bits(self.present, self.absent)


@dataclass(frozen=True, eq=False)
class Star(Structure):
    hub: int
    spokes: np.ndarray
    kind: ClassVar[Kind] = Kind.ST

    def __post_init__(self):
        object.__setattr__(self, "hub", int(self.hub))
        object.__setattr__(self, "spokes", as_node_set(self.spokes))
        if self.spokes.size < 2:
            raise VogError("a star needs at least 2 spokes")
        if np.any(self.spokes == self.hub):
            raise VogError("star hub listed among its spokes")

    def all_nodes(self):
        return np.union1d(self.spokes, [self.hub])

    def area(self, n):
        return cell_keys(np.full(self.spokes.size, self.hub), self.spokes, n)

    def area_size(self):
        return int(self.spokes.size)

    def cost(self, n):
        self._check_range(n)
        k = int(self.spokes.size)
        return universal_int_cost(k) + math.log2(n) + log_binomial(n - 1, k)

    def signature(self):
        return (self.kind.value, self.hub, tuple(self.spokes.tolist()))


@dataclass(frozen=True, eq=False)
class Chain(Structure):
    order: np.ndarray
    kind: ClassVar[Kind] = Kind.CH

    def __post_init__(self):
        order = np.asarray(self.order, dtype=np.int64).ravel()
        object.__setattr__(self, "order", order)
        if order.size < 2:
            raise VogError("a chain needs at least 2 nodes")
        if np.unique(order).size != order.size:
            raise VogError("chain repeats a node")

    def all_nodes(self):
        return np.sort(self.order)

    def area(self, n):
        return cell_keys(self.order[:-1], self.order[1:], n)

    def area_size(self):
        return int(self.order.size - 1)

    def cost(self, n):
        self._check_range(n)
        k = int(self.order.size)
        return universal_int_cost(k - 1) + float(np.log2(n - np.arange(k, dtype=np.float64)).sum())

    def signature(self):
        seq = self.order.tolist()
        return (self.kind.value, tuple(min(seq, seq[::-1])))


def count_present(g: Graph, keys: np.ndarray) -> int:
    return int(g.is_edge_key(keys).sum())


def near_clique(g: Graph, nodes: Iterable[int]) -> NearClique:
    ns = as_node_set(nodes, g.n)
    k = ns.size
    present = count_present(g, _clique_keys(ns, g.n))
    return NearClique(ns, present, k * (k - 1) // 2 - present)


def near_bipartite(g: Graph, a: Iterable[int], b: Iterable[int]) -> NearBipartite:
    proto = FullBipartite(as_node_set(a, g.n), as_node_set(b, g.n))
    present = count_present(g, proto.area(g.n))
    return NearBipartite(proto.a, proto.b, present, proto.area_size() - present)


def structure_cost(s: Structure, n: int) -> float:
    return s.cost(n)


# ---------------------------------------------------------------------------
# models

@dataclass
class Model:
    structures: list[Structure] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.structures)

    def __iter__(self):
        return iter(self.structures)

    @property
    def counts(self) -> dict[Kind, int]:
        out = {k: 0 for k in KINDS}
        for s in self.structures:
            out[s.kind] += 1
        return out


def model_header_cost(counts: dict[Kind, int] | Sequence[int]) -> float:
    """Bits for |M| and the per-type counts plus all type codes."""
    vals = list(counts.values()) if isinstance(counts, dict) else list(counts)
    total = sum(vals)
    bits = universal_int_cost(total + 1) + log_binomial(total + len(KINDS) - 1, len(KINDS) - 1)
    for c in vals:
        if c:
            bits += c * -math.log2(c / total)
    return bits


def model_cost(model: Model, n: int) -> float:
    """L(M): header, type codes and every structure's own cost."""
    return model_header_cost(model.counts) + sum(s.cost(n) for s in model)


# ---------------------------------------------------------------------------
# coverage and errors

@dataclass
class CoverageState:
    n: int
    covered: np.ndarray
    exact: np.ndarray

    @property
    def n_cells(self) -> int:
        return self.n * (self.n - 1) // 2


def build_coverage(g: Graph, model: Model | Iterable[Structure]) -> CoverageState:
    full_parts, near_parts = [], []
    for s in model:
        s._check_range(g.n)
        (near_parts if s.exact else full_parts).append(s.area(g.n))
    empty = np.zeros(0, dtype=np.int64)
    exact = np.unique(np.concatenate(near_parts)) if near_parts else empty
    full = np.unique(np.concatenate(full_parts)) if full_parts else empty
    return CoverageState(g.n, np.union1d(full, exact), exact)


@dataclass(frozen=True)
class ErrorCost:
    pos_bits: float
    neg_bits: float
    pos_ones: int
    pos_cells: int
    neg_ones: int
    neg_cells: int


def _error_from_counts(n_cells: int, m: int, covered: int, covered_edges: int,
                       exact: int, exact_edges: int) -> ErrorCost:
    pos_cells = covered - exact
    pos_ones = pos_cells - (covered_edges - exact_edges)
    neg_cells = n_cells - covered
    neg_ones = m - covered_edges
    return ErrorCost(error_part_cost(pos_ones, pos_cells), error_part_cost(neg_ones, neg_cells),
                     pos_ones, pos_cells, neg_ones, neg_cells)


def error_cost(g: Graph, cov: CoverageState) -> ErrorCost:
    cov_edges = int(g.is_edge_key(cov.covered).sum())
    exact_edges = int(g.is_edge_key(cov.exact).sum())
    return _error_from_counts(g.n_cells, g.m, cov.covered.size, cov_edges, cov.exact.size,
                              exact_edges)


@dataclass
class CostReport:
    model_bits: float
    err_pos_bits: float
    err_neg_bits: float
    total_bits: float
    baseline_bits: float
    unexplained_edge_fraction: float
    n_structures: int = 0
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        return self.total_bits / self.baseline_bits if self.baseline_bits else 1.0

    def to_dict(self) -> dict:
        return {
            "baseline_bits": self.baseline_bits,
            "total_bits": self.total_bits,
            "ratio": self.ratio,
            "model_bits": self.model_bits,
            "err_pos_bits": self.err_pos_bits,
            "err_neg_bits": self.err_neg_bits,
            "unexplained_edge_fraction": self.unexplained_edge_fraction,
            "n_structures": self.n_structures,
            "counts": dict(self.counts),
        }


def baseline_cost(g: Graph) -> float:
    """L(G, empty model)."""
    return universal_int_cost(1) + error_part_cost(g.m, g.n_cells)


def _report(g: Graph, model_bits: float, err: ErrorCost, counts: dict[Kind, int]) -> CostReport:
    total = model_bits + err.pos_bits + err.neg_bits
    return CostReport(
        model_bits=model_bits,
        err_pos_bits=err.pos_bits,
        err_neg_bits=err.neg_bits,
        total_bits=total,
        baseline_bits=baseline_cost(g),
        unexplained_edge_fraction=err.neg_ones / g.m if g.m else 0.0,
        n_structures=sum(counts.values()),
        counts={k.value: v for k, v in counts.items()},
    )


def total_cost(g: Graph, model: Model) -> CostReport:
    """L(G, M) = L(M) + L(E+) + L(E-), with the empty-model baseline."""
    err = error_cost(g, build_coverage(g, model))
    return _report(g, model_cost(model, g.n), err, model.counts)


# ---------------------------------------------------------------------------
# lossless round trip

@dataclass
class Encoding:
    """Everything a receiver needs besides the code lengths themselves."""
    n: int
    model: Model
    near_payload: list[np.ndarray]
    err_pos: np.ndarray
    err_neg: np.ndarray


def encode(g: Graph, model: Model) -> Encoding:
    payload = []
    for s in model:
        if s.exact:
            area = s.area(g.n)
            present = area[g.is_edge_key(area)]
            if present.size != s.present:
                raise VogError(f"{s.kind} edge count {s.present} disagrees with graph ({present.size})")
            payload.append(np.sort(present))
    cov = build_coverage(g, model)
    asserted = np.setdiff1d(cov.covered, cov.exact, assume_unique=True)
    err_pos = asserted[~g.is_edge_key(asserted)]
    edges = g.edge_keys
    err_neg = edges[~np.isin(edges, cov.covered, assume_unique=True)]
    return Encoding(g.n, model, payload, err_pos, err_neg)


def decode(enc: Encoding) -> np.ndarray:
    """Rebuild the sorted edge keys from a model, near payloads and the error cells."""
    n = enc.n
    full_cells: set[int] = set()
    near_cells: set[int] = set()
    near_edges: set[int] = set()
    payload = iter(enc.near_payload)
    for s in enc.model:
        if s.exact:
            near_cells.update(s.area(n).tolist())
            near_edges.update(next(payload).tolist())
        else:
            full_cells.update(s.area(n).tolist())
    asserted = full_cells - near_cells
    edges = (asserted - set(enc.err_pos.tolist())) | near_edges | set(enc.err_neg.tolist())
    return np.array(sorted(edges), dtype=np.int64)


# ---------------------------------------------------------------------------
# incremental accounting for greedy assembly

class CostTracker:
    """Running L(G, M) over a fixed pool of structures added and removed one at a time.

    Every pool member's area is mapped once into a shared cell universe, so
    an add or remove costs O(|area|) and gives exactly the totals that
    ``total_cost`` computes from scratch.
    """

    def __init__(self, g: Graph, pool: Sequence[Structure]):
        self.g = g
        self.pool = list(pool)
        areas = [s.area(g.n) for s in self.pool]
        universe = np.unique(np.concatenate(areas)) if areas else np.zeros(0, np.int64)
        self._idx = [np.searchsorted(universe, a) for a in areas]
        self._edge = g.is_edge_key(universe)
        self._full = np.zeros(universe.size, dtype=np.int32)
        self._near = np.zeros(universe.size, dtype=np.int32)
        self._cost = [s.cost(g.n) for s in self.pool]
        self.counts = {k: 0 for k in KINDS}
        self.covered = self.covered_edges = self.exact = self.exact_edges = 0
        self.active: list[int] = []

    def add(self, i: int) -> None:
        idx = self._idx[i]
        fresh = (self._full[idx] + self._near[idx]) == 0
        self.covered += int(fresh.sum())
        self.covered_edges += int(self._edge[idx][fresh].sum())
        s = self.pool[i]
        if s.exact:
            fresh_exact = self._near[idx] == 0
            self.exact += int(fresh_exact.sum())
            self.exact_edges += int(self._edge[idx][fresh_exact].sum())
            self._near[idx] += 1
        else:
            self._full[idx] += 1
        self.counts[s.kind] += 1
        self.active.append(i)

    def remove(self, i: int) -> None:
        idx = self._idx[i]
        s = self.pool[i]
        if s.exact:
            self._near[idx] -= 1
            gone_exact = self._near[idx] == 0
            self.exact -= int(gone_exact.sum())
            self.exact_edges -= int(self._edge[idx][gone_exact].sum())
        else:
            self._full[idx] -= 1
        gone = (self._full[idx] + self._near[idx]) == 0
        self.covered -= int(gone.sum())
        self.covered_edges -= int(self._edge[idx][gone].sum())
        self.counts[s.kind] -= 1
        self.active.remove(i)

    @property
    def struct_bits(self) -> float:
        return sum(self._cost[i] for i in self.active)

    def error(self) -> ErrorCost:
        return _error_from_counts(self.g.n_cells, self.g.m, self.covered, self.covered_edges,
                                  self.exact, self.exact_edges)

    def total(self) -> float:
        err = self.error()
        return model_header_cost(self.counts) + self.struct_bits + err.pos_bits + err.neg_bits

    def report(self) -> CostReport:
        return _report(self.g, model_header_cost(self.counts) + self.struct_bits, self.error(),
                       self.counts)

    def model(self) -> Model:
        return Model([self.pool[i] for i in self.active])
