"""Synthetic graphs for tests, demos and benchmarks."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codec import FullBipartite, FullClique, Chain, Star, Structure
from .graph import Graph, VogError, cell_keys


@dataclass
class Planted:
    graph: Graph
    truth: list[Structure]


def _clique_edges(nodes: np.ndarray) -> np.ndarray:
    i, j = np.triu_indices(nodes.size, 1)
    return np.stack([nodes[i], nodes[j]], axis=1)


def _star_edges(hub: int, spokes: np.ndarray) -> np.ndarray:
    return np.stack([np.full(spokes.size, hub), spokes], axis=1)


def _assemble(n: int, parts: list[np.ndarray], truth: list[Structure]) -> Planted:
    edges = np.concatenate(parts) if parts else np.zeros((0, 2), dtype=np.int64)
    return Planted(Graph.from_edges(edges[:, 0], edges[:, 1], n), truth)


def cavemen(left: int = 42, right: int = 110, big_star: int = 800, small_star: int = 91,
            n_total: int = 841) -> Planted:
    """Two cliques linked through two stars.

    Layout: nodes ``0..left-1`` form the left clique, the next ``right`` nodes
    the right clique, then the two star hubs, then leaf nodes. The big star's
    spokes are every left-clique node, a prefix of the right clique, the
    small hub and all leaves. The small star's spokes are the big hub, the
    first right-clique node and a prefix of the leaves. Overlap sizes are
    solved so the node count equals ``n_total``; with the defaults this
    gives 841 nodes and 7744 edges.
    """
    if min(left, right) < 3 or big_star < 4 or small_star < 4:
        raise VogError("cavemen sizes too small")
    h1 = left + right
    h2 = h1 + 1
    leaves = n_total - left - right - 2
    big_spokes = big_star - 1
    small_spokes = small_star - 1
    into_right = big_spokes - left - 1 - leaves
    small_leaves = small_spokes - 2
    if leaves < small_leaves or not 1 <= into_right <= right or small_leaves < 0:
        raise VogError("cavemen sizes inconsistent with node total")
    a = np.arange(left)
    b = np.arange(left, left + right)
    lv = np.arange(h2 + 1, n_total)
    s1 = np.concatenate([a, b[:into_right], [h2], lv])
    s2 = np.concatenate([[h1, b[0]], lv[:small_leaves]])
    parts = [_clique_edges(a), _clique_edges(b), _star_edges(h1, s1), _star_edges(h2, s2)]
    truth = [FullClique(a), FullClique(b), Star(h1, s1), Star(h2, s2)]
    return _assemble(n_total, parts, truth)


def _random_pairs(rng: np.random.Generator, n: int, count: int,
                  weights: np.ndarray | None = None) -> np.ndarray:
    """``count`` distinct cell keys, endpoints uniform or weighted."""
    if count > n * (n - 1) // 2:
        raise VogError("more edges requested than node pairs")
    keys = np.zeros(0, dtype=np.int64)
    while keys.size < count:
        need = int((count - keys.size) * 1.1) + 16
        if weights is None:
            u = rng.integers(n, size=need)
            v = rng.integers(n, size=need)
        else:
            u = rng.choice(n, size=need, p=weights)
            v = rng.choice(n, size=need, p=weights)
        ok = u != v
        new = cell_keys(u[ok], v[ok], n)
        keys = np.unique(np.concatenate([keys, new]))
    if keys.size > count:
        keys = rng.choice(keys, size=count, replace=False)
    return np.sort(keys)


def erdos_renyi(n: int, p: float, seed: int = 0) -> Graph:
    if n < 1 or not 0 <= p <= 1:
        raise VogError("need n >= 1 and 0 <= p <= 1")
    rng = np.random.default_rng(seed)
    count = int(rng.binomial(n * (n - 1) // 2, p))
    keys = _random_pairs(rng, n, count)
    return Graph.from_edges(keys // n, keys % n, n)


def power_law(n: int, m: int, exponent: float = 2.5, seed: int = 0) -> Graph:
    """Chung-Lu style graph with ``m`` edges and degree weights ~ rank^(-1/(exponent-1))."""
    if n < 2 or m < 0 or exponent <= 1:
        raise VogError("need n >= 2, m >= 0 and exponent > 1")
    rng = np.random.default_rng(seed)
    w = np.arange(1, n + 1, dtype=np.float64) ** (-1.0 / (exponent - 1.0))
    w /= w.sum()
    keys = _random_pairs(rng, n, m, w)
    perm = rng.permutation(n)
    return Graph.from_edges(perm[keys // n], perm[keys % n], n)


def planted(n: int, plants: list[tuple[str, int]], p_noise: float = 0.0, seed: int = 0
            ) -> Planted:
    """Plant structures on disjoint random node sets over Erdos-Renyi noise.

    ``plants`` holds ``(kind, size)`` pairs with kind in fc, st, ch, fb; for
    fb the size is split as evenly as possible between the two sides.
    """
    rng = np.random.default_rng(seed)
    total = sum(size for _, size in plants)
    if total > n:
        raise VogError("planted structures need more nodes than the graph has")
    perm = rng.permutation(n)
    parts: list[np.ndarray] = []
    truth: list[Structure] = []
    at = 0
    for kind, size in plants:
        nodes = perm[at:at + size]
        at += size
        if kind == "fc":
            if size < 2:
                raise VogError("clique needs 2+ nodes")
            parts.append(_clique_edges(nodes))
            truth.append(FullClique(nodes))
        elif kind == "st":
            if size < 3:
                raise VogError("star needs 3+ nodes")
            parts.append(_star_edges(nodes[0], nodes[1:]))
            truth.append(Star(nodes[0], nodes[1:]))
        elif kind == "ch":
            if size < 2:
                raise VogError("chain needs 2+ nodes")
            parts.append(np.stack([nodes[:-1], nodes[1:]], axis=1))
            truth.append(Chain(nodes))
        elif kind == "fb":
            if size < 2:
                raise VogError("bipartite core needs 2+ nodes")
            half = size // 2
            a, b = nodes[:half], nodes[half:]
            aa, bb = np.meshgrid(a, b, indexing="ij")
            parts.append(np.stack([aa.ravel(), bb.ravel()], axis=1))
            truth.append(FullBipartite(a, b))
        else:
            raise VogError(f"cannot plant {kind!r}")
    if p_noise > 0:
        count = int(rng.binomial(n * (n - 1) // 2, p_noise))
        keys = _random_pairs(rng, n, count)
        parts.append(np.stack([keys // n, keys % n], axis=1))
    return _assemble(n, parts, truth)
