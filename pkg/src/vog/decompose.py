"""Candidate subgraph generation.

SlashBurn repeatedly removes the top-degree nodes of the giant connected
component. Each removed hub contributes its egonet as a candidate, and every
component that splits off from the giant one is a candidate too.
"""
from __future__ import annotations

import io
import logging
import math
from dataclasses import dataclass, field
from typing import IO

import numpy as np
from scipy.sparse import csgraph

from .graph import Graph, ParseError, VogError

log = logging.getLogger(__name__)

EGONET = "slashburn-egonet"
COMPONENT = "slashburn-component"
EXTERNAL = "external"


@dataclass
class SlashburnParams:
    k: int | None = None        # hubs per iteration; None -> ceil(0.5% of n)
    gcc_stop: int | None = None  # None -> min_size
    min_size: int = 10

    def resolve(self, n: int) -> "SlashburnParams":
        k = self.k if self.k is not None else max(1, math.ceil(0.005 * n))
        gcc_stop = self.gcc_stop if self.gcc_stop is not None else self.min_size
        if k < 1:
            raise VogError("k must be at least 1")
        if gcc_stop < 2:
            raise VogError("gcc_stop must be at least 2")
        if self.min_size < 1:
            raise VogError("min_size must be positive")
        return SlashburnParams(k, gcc_stop, self.min_size)


@dataclass
class CandidateSet:
    subgraphs: list[np.ndarray] = field(default_factory=list)
    provenance: list[str] = field(default_factory=list)
    _seen: set = field(default_factory=set, repr=False)

    def add(self, nodes: np.ndarray, tag: str, min_size: int = 1) -> bool:
        nodes = np.unique(np.asarray(nodes, dtype=np.int64))
        if nodes.size < min_size:
            return False
        key = nodes.tobytes()
        if key in self._seen:
            return False
        self._seen.add(key)
        self.subgraphs.append(nodes)
        self.provenance.append(tag)
        return True

    def __len__(self) -> int:
        return len(self.subgraphs)

    def __iter__(self):
        return iter(zip(self.subgraphs, self.provenance))


def _largest(labels: np.ndarray, n_comp: int) -> int:
    sizes = np.bincount(labels, minlength=n_comp)
    return int(np.argmax(sizes))  # first (lowest label) among equal sizes


def slashburn_decompose(g: Graph, params: SlashburnParams | None = None) -> CandidateSet:
    if g.n == 0:
        raise VogError("cannot decompose an empty graph")
    p = (params or SlashburnParams()).resolve(g.n)
    out = CandidateSet()
    adj = g.csr

    n_comp, labels = csgraph.connected_components(adj, directed=False)
    giant_label = _largest(labels, n_comp)
    if n_comp > 1:
        order = np.argsort(labels, kind="stable")
        bounds = np.searchsorted(labels[order], np.arange(n_comp + 1))
        for c in range(n_comp):
            if c != giant_label and bounds[c + 1] - bounds[c] >= p.min_size:
                out.add(order[bounds[c]:bounds[c + 1]], COMPONENT, p.min_size)
    gcc = np.flatnonzero(labels == giant_label)

    iteration = 0
    while gcc.size > p.gcc_stop:
        sub = adj[gcc][:, gcc].tocsr()
        if sub.nnz == 0:
            break
        iteration += 1
        deg = np.diff(sub.indptr)
        k = min(p.k, gcc.size)
        # highest degree first, ties by smaller index (gcc is sorted)
        top = np.lexsort((np.arange(gcc.size), -deg))[:k]
        for h in top:
            ego = np.append(sub.indices[sub.indptr[h]:sub.indptr[h + 1]], h)
            out.add(gcc[ego], EGONET, p.min_size)
        keep = np.ones(gcc.size, dtype=bool)
        keep[top] = False
        rest = np.flatnonzero(keep)
        if rest.size == 0:
            break
        sub = sub[rest][:, rest]
        n_comp, labels = csgraph.connected_components(sub, directed=False)
        giant_label = _largest(labels, n_comp)
        if n_comp > 1:
            order = np.argsort(labels, kind="stable")
            bounds = np.searchsorted(labels[order], np.arange(n_comp + 1))
            sizes = np.diff(bounds)
            for c in np.flatnonzero(sizes >= p.min_size):
                if c != giant_label:
                    out.add(gcc[rest[order[bounds[c]:bounds[c + 1]]]], COMPONENT, p.min_size)
        gcc = gcc[rest[labels == giant_label]]
    log.debug("slashburn: %d iterations, %d candidates", iteration, len(out))
    return out


def load_external_candidates(source: IO | str, g: Graph, min_size: int = 1) -> CandidateSet:
    """One candidate per line, whitespace-separated external labels."""
    if isinstance(source, str):
        source = io.StringIO(source)
    out = CandidateSet()
    index = g.label_index
    for lineno, raw in enumerate(source, 1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        nodes = []
        for tok in line.split():
            if tok not in index:
                raise ParseError(f"unknown node label {tok!r}", lineno)
            nodes.append(index[tok])
        out.add(np.array(nodes, dtype=np.int64), EXTERNAL, min_size)
    return out


def write_candidates(cands: CandidateSet, g: Graph, dest: IO) -> None:
    for nodes, _ in cands:
        dest.write(" ".join(g.labels[i] for i in nodes) + "\n")
