"""Decompose, label and assemble in one call."""
from __future__ import annotations

import logging
import time
from typing import Iterable

from .assembler import DEFAULT_HEURISTICS, Heuristic, SummaryResult, summarize
from .decompose import CandidateSet, SlashburnParams, slashburn_decompose
from .graph import Graph
from .labeler import EXACT_ROLE_LIMIT, label_candidates

log = logging.getLogger(__name__)


def run_pipeline(g: Graph, candidates: CandidateSet | None = None,
                 params: SlashburnParams | None = None, seed: int = 0,
                 heuristics: Iterable[Heuristic] = DEFAULT_HEURISTICS,
                 exact_limit: int = EXACT_ROLE_LIMIT) -> SummaryResult:
    t0 = time.perf_counter()
    if candidates is None:
        candidates = slashburn_decompose(g, params)
    t1 = time.perf_counter()
    labeled = label_candidates(g, candidates, seed, exact_limit)
    t2 = time.perf_counter()
    result = summarize(g, labeled, heuristics)
    t3 = time.perf_counter()
    log.info("candidates %d (%.2fs), labelled %d (%.2fs), assembled (%.2fs)",
             len(candidates), t1 - t0, len(labeled), t2 - t1, t3 - t2)
    result.labeled = labeled
    return result
