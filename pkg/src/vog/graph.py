"""Undirected simple graphs over compact node indices.

The adjacency is held as a CSR pair (``indptr``, ``indices``) with strictly
sorted neighbour lists. External node labels are kept as strings and mapped
to internal indices in order of first appearance.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from functools import cached_property
from typing import IO, Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph


class VogError(Exception):
    """Base class for data-validation errors raised by this package."""


class ParseError(VogError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def cell_keys(u: np.ndarray, v: np.ndarray, n: int) -> np.ndarray:
    """Encode unordered pairs ``{u, v}`` (u != v) as ``min * n + max``."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    return lo * n + hi


def as_node_set(nodes: Iterable[int], n: int | None = None) -> np.ndarray:
    """Sorted, deduplicated int64 array of node indices.

    Raises ``VogError`` when an index falls outside ``0..n-1``.
    """
    arr = np.unique(np.asarray(list(nodes) if not isinstance(nodes, np.ndarray) else nodes,
                               dtype=np.int64))
    if n is not None and arr.size and (arr[0] < 0 or arr[-1] >= n):
        bad = arr[0] if arr[0] < 0 else arr[-1]
        raise VogError(f"node index {int(bad)} out of range for graph with {n} nodes")
    return arr


@dataclass(frozen=True, eq=False)
class Graph:
    indptr: np.ndarray
    indices: np.ndarray
    labels: tuple[str, ...]

    @classmethod
    def from_edges(cls, src: Sequence[int] | np.ndarray, dst: Sequence[int] | np.ndarray,
                   n: int | None = None, labels: Sequence[str] | None = None) -> "Graph":
        """Build a graph from endpoint arrays; self-loops and duplicates are dropped."""
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        if src.shape != dst.shape:
            raise VogError("endpoint arrays differ in length")
        if n is None:
            n = int(max(src.max(initial=-1), dst.max(initial=-1)) + 1)
        if src.size and (min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= n):
            raise VogError("edge endpoint out of range")
        keep = src != dst
        keys = np.unique(cell_keys(src[keep], dst[keep], n))
        lo, hi = np.divmod(keys, n) if n else (keys, keys)
        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        np.cumsum(indptr, out=indptr)
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n:
            raise VogError("label count does not match node count")
        return cls(indptr, cols.astype(np.int64), tuple(str(x) for x in labels))

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return int(self.indptr[-1]) // 2

    @cached_property
    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    @cached_property
    def label_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < nb.size and nb[i] == v)

    @cached_property
    def csr(self) -> sp.csr_matrix:
        data = np.ones(self.indices.size, dtype=np.int8)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    @cached_property
    def edge_keys(self) -> np.ndarray:
        """Sorted cell keys of all edges, each edge once."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degree)
        upper = rows < self.indices
        return rows[upper] * self.n + self.indices[upper]

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges with ``u < v``, sorted."""
        keys = self.edge_keys
        return np.stack(np.divmod(keys, self.n), axis=1)

    @property
    def n_cells(self) -> int:
        return self.n * (self.n - 1) // 2

    def is_edge_key(self, keys: np.ndarray) -> np.ndarray:
        """Boolean mask: which cell keys are edges of the graph."""
        ek = self.edge_keys
        if ek.size == 0:
            return np.zeros(len(keys), dtype=bool)
        pos = np.searchsorted(ek, keys)
        pos[pos == ek.size] = 0
        return ek[pos] == keys

    def nodes_for_labels(self, labels: Iterable[str]) -> np.ndarray:
        idx = self.label_index
        try:
            return np.array([idx[lab] for lab in labels], dtype=np.int64)
        except KeyError as exc:
            raise VogError(f"unknown node label {exc.args[0]!r}") from None

    def check(self) -> None:
        """Assert the structural invariants (used by tests)."""
        for u in range(self.n):
            nb = self.neighbors(u)
            assert np.all(np.diff(nb) > 0), f"neighbours of {u} not strictly sorted"
            assert not np.any(nb == u), f"self-loop at {u}"
        assert (self.csr != self.csr.T).nnz == 0, "adjacency not symmetric"
        assert self.indptr[-1] % 2 == 0


@dataclass(eq=False)
class Subgraph:
    """Induced subgraph of ``parent`` on the sorted node array ``nodes``.

    Local index ``i`` corresponds to parent node ``nodes[i]``.
    """
    parent: Graph
    nodes: np.ndarray
    adj: sp.csr_matrix = field(repr=False)

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    @cached_property
    def n_edges(self) -> int:
        return int(self.adj.nnz) // 2

    @cached_property
    def local_degrees(self) -> np.ndarray:
        return np.diff(self.adj.indptr)

    def local_neighbors(self, i: int) -> np.ndarray:
        return self.adj.indices[self.adj.indptr[i]:self.adj.indptr[i + 1]]

    def local_edges(self) -> np.ndarray:
        coo = sp.triu(self.adj, k=1).tocoo()
        return np.stack([coo.row, coo.col], axis=1).astype(np.int64)

    def edges(self) -> np.ndarray:
        """Induced edges as parent-index pairs."""
        return self.nodes[self.local_edges()]

    def components(self) -> tuple[int, np.ndarray]:
        return csgraph.connected_components(self.adj, directed=False)

    def restrict(self, local: np.ndarray) -> "Subgraph":
        local = np.sort(np.asarray(local, dtype=np.int64))
        return Subgraph(self.parent, self.nodes[local], self.adj[local][:, local].tocsr())


def induced_subgraph(g: Graph, nodes: Iterable[int]) -> Subgraph:
    ns = as_node_set(nodes, g.n)
    adj = g.csr[ns][:, ns].tocsr()
    adj.sort_indices()
    return Subgraph(g, ns, adj)


def degrees(sub: Subgraph) -> np.ndarray:
    """Induced degree of each member, in member order."""
    return sub.local_degrees.copy()


def load_edge_list(source: IO | str, base: int | None = None, delimiter: str | None = None,
                   keep_loop_nodes: bool = False) -> Graph:
    """Parse a whitespace (or ``delimiter``) separated edge list.

    ``base=None`` treats labels as opaque strings indexed by first appearance.
    ``base=0`` or ``base=1`` reads integer labels and uses ``label - base`` as
    the index, so unlisted ids in range become isolated nodes.
    Nodes that only occur in self-loops are dropped unless ``keep_loop_nodes``.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    index: dict[str, int] = {}
    order: list[str] = []
    src: list[int] = []
    dst: list[int] = []
    loops: list[str] = []
    seen_line = False
    for lineno, raw in enumerate(source, 1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        seen_line = True
        parts = line.split(delimiter) if delimiter else line.split()
        parts = [p.strip() for p in parts if p.strip()]
        if len(parts) != 2:
            raise ParseError(f"expected 2 tokens, got {len(parts)}", lineno)
        a, b = parts
        if base is not None:
            try:
                ia, ib = int(a) - base, int(b) - base
            except ValueError:
                raise ParseError(f"non-integer node id in {line!r}", lineno) from None
            if ia < 0 or ib < 0:
                raise ParseError(f"node id below base {base}", lineno)
            src.append(ia)
            dst.append(ib)
            continue
        if a == b:
            loops.append(a)
            continue
        for tok in (a, b):
            if tok not in index:
                index[tok] = len(order)
                order.append(tok)
        src.append(index[a])
        dst.append(index[b])
    if not seen_line:
        raise ParseError("empty edge list")
    if base is not None:
        src_a = np.asarray(src, dtype=np.int64)
        dst_a = np.asarray(dst, dtype=np.int64)
        keep = src_a != dst_a
        if keep_loop_nodes:
            n = int(max(src_a.max(), dst_a.max())) + 1
        else:
            if not keep.any():
                raise ParseError("edge list has no edges besides self-loops")
            n = int(max(src_a[keep].max(), dst_a[keep].max())) + 1
            src_a, dst_a = src_a[keep], dst_a[keep]
        return Graph.from_edges(src_a, dst_a, n, [str(i + base) for i in range(n)])
    if keep_loop_nodes:
        for tok in loops:
            if tok not in index:
                index[tok] = len(order)
                order.append(tok)
    if not order:
        raise ParseError("edge list has no edges besides self-loops")
    return Graph.from_edges(src, dst, len(order), order)


def write_edge_list(g: Graph, dest: IO) -> None:
    for u, v in g.edges():
        dest.write(f"{g.labels[u]}\t{g.labels[v]}\n")
