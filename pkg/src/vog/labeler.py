"""Label candidate subgraphs with their cheapest vocabulary structure.

Each candidate is first checked for an error-free match. Otherwise it is
encoded as all six types and the one with the lowest local cost wins:
structure bits plus the local error (modelled non-edges inside a full
structure's area, and the candidate's edges left outside the area). Local
error parts are charged by their prefix codes only, so a perfect match has
zero local error.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .codec import (Chain, FullBipartite, FullClique, Kind, NearBipartite, NearClique, Star,
                    Structure, prefix_bits, prefix_code_lengths)
from .decompose import CandidateSet
from .graph import Graph, Subgraph, induced_subgraph

HETEROPHILY = 0.4
DAMPING = 0.5
TOLERANCE = 1e-6
MAX_ITERS = 100

# candidates this small get exhaustive role search instead of the heuristics
EXACT_ROLE_LIMIT = 8

PRECEDENCE = {Kind.FC: 0, Kind.ST: 1, Kind.FB: 2, Kind.CH: 3, Kind.NC: 4, Kind.NB: 5}


@dataclass
class LabeledCandidate:
    structure: Structure
    local_cost: float
    benefit: float
    error_bits: float = 0.0
    provenance: str = ""

    @property
    def beneficial(self) -> bool:
        return self.benefit > 0

    @property
    def nodes(self) -> np.ndarray:
        return self.structure.all_nodes()


# ---------------------------------------------------------------------------
# helpers

def two_coloring(adj: sp.csr_matrix) -> np.ndarray | None:
    """BFS 2-colouring (0/1 per node), or None if there is an odd cycle."""
    n = adj.shape[0]
    color = np.full(n, -1, dtype=np.int8)
    indptr, indices = adj.indptr, adj.indices
    for root in range(n):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in indices[indptr[u]:indptr[u + 1]]:
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    return color


def _is_connected(sub: Subgraph) -> bool:
    return sub.size <= 1 or sub.components()[0] == 1


def _bfs_far(adj: sp.csr_matrix, start: int) -> tuple[int, np.ndarray]:
    order, pred = csgraph.breadth_first_order(adj, start, directed=False,
                                              return_predecessors=True)
    return int(order[-1]), pred


def _path_to(pred: np.ndarray, end: int) -> list[int]:
    path = [end]
    while pred[path[-1]] >= 0:
        path.append(int(pred[path[-1]]))
    return path[::-1]


# ---------------------------------------------------------------------------
# perfect structures

def match_perfect(sub: Subgraph) -> Kind | None:
    s = sub.size
    if s < 2 or not _is_connected(sub):
        return None
    deg = sub.local_degrees
    e = sub.n_edges
    if np.all(deg == s - 1):
        return Kind.FC
    if s >= 3 and e == s - 1 and np.count_nonzero(deg == s - 1) == 1:
        return Kind.ST
    if e == s - 1 and np.count_nonzero(deg == 1) == 2 and np.count_nonzero(deg == 2) == s - 2:
        return Kind.CH
    color = two_coloring(sub.adj)
    if color is not None:
        na = int(np.count_nonzero(color == 0))
        if e == na * (s - na):
            return Kind.ST if min(na, s - na) == 1 else Kind.FB
    return None


def _perfect_structure(sub: Subgraph, kind: Kind) -> Structure:
    nodes, deg = sub.nodes, sub.local_degrees
    if kind is Kind.FC:
        return FullClique(nodes)
    if kind is Kind.ST:
        hub = int(np.argmax(deg))
        return Star(nodes[hub], np.delete(nodes, hub))
    if kind is Kind.CH:
        start = int(np.flatnonzero(deg == 1)[0])
        order, _ = csgraph.breadth_first_order(sub.adj, start, directed=False)
        return Chain(nodes[order])
    color = two_coloring(sub.adj)
    return FullBipartite(nodes[color == 0], nodes[color == 1])


# ---------------------------------------------------------------------------
# role assignment

def star_roles(sub: Subgraph) -> Star:
    """Highest induced degree is the hub (smallest index on ties)."""
    hub = int(np.argmax(sub.local_degrees))
    return Star(sub.nodes[hub], np.delete(sub.nodes, hub))


def _propagate_sides(adj: sp.csr_matrix) -> np.ndarray:
    """Boolean side-A mask from damped heterophily propagation."""
    n = adj.shape[0]
    deg = np.diff(adj.indptr).astype(np.float64)
    hub = int(np.argmax(deg))
    prior = np.zeros(n)
    prior[adj.indices[adj.indptr[hub]:adj.indptr[hub + 1]]] = -1.0
    prior[hub] = 1.0
    inv = np.divide(1.0, deg, out=np.zeros(n), where=deg > 0)
    walk = sp.diags(inv) @ adj.astype(np.float64)
    belief = prior.copy()
    for _ in range(MAX_ITERS):
        update = (1 - DAMPING) * belief + DAMPING * (prior - HETEROPHILY * (walk @ belief))
        delta = np.abs(update - belief).max()
        belief = update
        if delta < TOLERANCE and np.all(belief != 0):
            break
    side_a = belief >= 0
    if side_a.all() or not side_a.any():
        side_a = np.zeros(n, dtype=bool)
        side_a[hub] = True
    return side_a


def bipartite_roles(sub: Subgraph) -> tuple[np.ndarray, np.ndarray]:
    """Split into (A, B), the max-degree node in A.

    Exact 2-colouring when the subgraph is bipartite, heterophily
    propagation otherwise.
    """
    if sub.size < 2:
        raise ValueError("need at least 2 nodes")
    color = two_coloring(sub.adj)
    if color is not None and np.unique(color).size == 2:
        hub = int(np.argmax(sub.local_degrees))
        side_a = color == color[hub]
    else:
        side_a = _propagate_sides(sub.adj)
    return sub.nodes[side_a], sub.nodes[~side_a]


def chain_roles(sub: Subgraph, rng: np.random.Generator | None = None) -> Chain:
    """Double-BFS longest-path heuristic with endpoint extension.

    Works on the largest connected component if the subgraph is split.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    n_comp, labels = sub.components()
    if n_comp > 1:
        big = np.argmax(np.bincount(labels))
        sub = sub.restrict(np.flatnonzero(labels == big))
    adj = sub.adj
    start = int(rng.integers(sub.size))
    u, _ = _bfs_far(adj, start)
    v, pred = _bfs_far(adj, u)
    chain = _path_to(pred, v)
    grown = True
    while grown:
        grown = False
        for at_tail in (True, False):
            end = chain[-1] if at_tail else chain[0]
            keep = np.ones(sub.size, dtype=bool)
            keep[chain] = False
            keep[end] = True
            local = np.flatnonzero(keep)
            reduced = adj[local][:, local]
            src = int(np.searchsorted(local, end))
            far, pred = _bfs_far(reduced, src)
            if far == src:
                continue
            ext = [int(local[i]) for i in _path_to(pred, far)[1:]]
            chain = chain + ext if at_tail else ext[::-1] + chain
            grown = True
    return Chain(sub.nodes[np.asarray(chain)])


# ---------------------------------------------------------------------------
# local costs

class _LocalCoster:
    """Local cost of structures placed on (part of) one candidate subgraph."""

    def __init__(self, sub: Subgraph, n: int):
        self.sub = sub
        self.n = n
        self.cells = sub.size * (sub.size - 1) // 2
        self.edges = sub.n_edges

    def cost(self, s: Structure, area: int, area_edges: int) -> tuple[float, float]:
        """(total local bits, error bits) given area size and edges inside it."""
        err = 0.0
        if not s.exact:
            err += prefix_bits(area - area_edges, area_edges)
        outside = self.edges - area_edges
        err += prefix_bits(outside, self.cells - area - outside)
        return s.cost(self.n) + err, err


def _pair_edges(sub: Subgraph, left: np.ndarray, right: np.ndarray) -> int:
    """Edges between two disjoint local index sets."""
    return int(sub.adj[left][:, right].nnz)


def _candidates_heuristic(sub: Subgraph, core: Subgraph, rng) -> list[tuple[Structure, int]]:
    """(structure, edges inside its area) for the six types."""
    out: list[tuple[Structure, int]] = []
    loc = {int(x): i for i, x in enumerate(sub.nodes)}
    ce = core.n_edges
    t = core.size
    out.append((FullClique(core.nodes), ce))
    out.append((NearClique(core.nodes, ce, t * (t - 1) // 2 - ce), ce))
    if t >= 3:
        st = star_roles(core)
        out.append((st, int(core.local_degrees[np.searchsorted(core.nodes, st.hub)])))
    a, b = bipartite_roles(core)
    ia = np.array([loc[int(x)] for x in a])
    ib = np.array([loc[int(x)] for x in b])
    cross = _pair_edges(sub, ia, ib)
    out.append((FullBipartite(a, b), cross))
    out.append((NearBipartite(a, b, cross, a.size * b.size - cross), cross))
    ch = chain_roles(core, rng)
    out.append((ch, _chain_edges(sub, ch, loc)))
    return out


def _chain_edges(sub: Subgraph, ch: Chain, loc: dict[int, int]) -> int:
    idx = [loc[int(x)] for x in ch.order]
    adj = sub.adj
    return sum(1 for i, j in zip(idx, idx[1:]) if adj[i, j])


def _simple_paths(adj: sp.csr_matrix):
    """Every simple path with >= 2 nodes, each undirected path once."""
    n = adj.shape[0]
    nbrs = [adj.indices[adj.indptr[i]:adj.indptr[i + 1]].tolist() for i in range(n)]

    def extend(path, on_path):
        if len(path) >= 2 and path[0] < path[-1]:
            yield list(path)
        for w in nbrs[path[-1]]:
            if w not in on_path:
                path.append(w)
                on_path.add(w)
                yield from extend(path, on_path)
                path.pop()
                on_path.discard(w)

    for s in range(n):
        yield from extend([s], {s})


def _candidates_exact(sub: Subgraph, core: Subgraph, coster: _LocalCoster
                      ) -> list[tuple[Structure, int]]:
    """Like the heuristic roles, but each role-bearing type is optimised by enumeration."""
    out: list[tuple[Structure, int]] = []
    nodes = core.nodes
    t = core.size
    ce = core.n_edges
    out.append((FullClique(nodes), ce))
    out.append((NearClique(nodes, ce, t * (t - 1) // 2 - ce), ce))

    def best(options):
        top = None
        for s, ae in options:
            c, _ = coster.cost(s, s.area_size(), ae)
            if top is None or c < top[0]:
                top = (c, s, ae)
        return (top[1], top[2])

    deg = core.local_degrees
    if t >= 3:
        out.append(best((Star(nodes[h], np.delete(nodes, h)), int(deg[h])) for h in range(t)))
    dense = core.adj.toarray().astype(bool)
    splits = []
    for mask in range(1, 2 ** (t - 1)):
        side_b = np.array([(mask >> (i - 1)) & 1 if i else 0 for i in range(t)], dtype=bool)
        cross = int(dense[np.ix_(~side_b, side_b)].sum())
        splits.append((nodes[~side_b], nodes[side_b], cross))
    out.append(best((FullBipartite(a, b), x) for a, b, x in splits))
    out.append(best((NearBipartite(a, b, x, a.size * b.size - x), x) for a, b, x in splits))
    out.append(best((Chain(nodes[np.asarray(p)]), len(p) - 1) for p in _simple_paths(core.adj)))
    return out


def label(sub: Subgraph, g: Graph | None = None, rng: np.random.Generator | None = None,
          exact_limit: int = EXACT_ROLE_LIMIT, provenance: str = "") -> LabeledCandidate | None:
    """Cheapest structure for one candidate; None if it has no edges."""
    g = g or sub.parent
    n = g.n
    if sub.size < 2 or sub.n_edges == 0:
        return None
    coster = _LocalCoster(sub, n)
    kind = match_perfect(sub)
    if kind is not None:
        s = _perfect_structure(sub, kind)
        local, err = s.cost(n), 0.0
    else:
        n_comp, labels = sub.components()
        core = sub
        if n_comp > 1:
            big = np.argmax(np.bincount(labels))
            core = sub.restrict(np.flatnonzero(labels == big))
        if core.size <= exact_limit:
            options = _candidates_exact(sub, core, coster)
        else:
            options = _candidates_heuristic(sub, core, rng if rng is not None
                                            else np.random.default_rng(0))
        scored = []
        for s, ae in options:
            c, e = coster.cost(s, s.area_size(), ae)
            scored.append((c, PRECEDENCE[s.kind], e, s))
        local, _, err, s = min(scored, key=lambda x: (x[0], x[1]))
    return LabeledCandidate(s, local, noise_cost(g, sub) - local, err, provenance)


def noise_cost(g: Graph, sub: Subgraph) -> float:
    """Bits for the candidate's cells as part of the empty model's E- code."""
    l1, l0 = prefix_code_lengths(g.m, g.n_cells - g.m)
    cells = sub.size * (sub.size - 1) // 2
    return sub.n_edges * l1 + (cells - sub.n_edges) * l0


def label_candidates(g: Graph, cands: CandidateSet, seed: int = 0,
                     exact_limit: int = EXACT_ROLE_LIMIT) -> list[LabeledCandidate]:
    """Label every candidate; candidate ``i`` draws from RNG stream ``(seed, i)``."""
    out = []
    for i, (nodes, tag) in enumerate(cands):
        rng = np.random.default_rng([seed, i])
        lc = label(induced_subgraph(g, nodes), g, rng, exact_limit, tag)
        if lc is not None:
            out.append(lc)
    return out

