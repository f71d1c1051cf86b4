"""MDL graph summarization over a fixed vocabulary of cliques, bipartite cores, stars and chains."""
from .assembler import (DEFAULT_HEURISTICS, GreedyNForget, Plain, SummaryResult, TopK,
                        read_model, summarize, write_model)
from .codec import (Chain, CostReport, FullBipartite, FullClique, Kind, Model, NearBipartite,
                    NearClique, Star, baseline_cost, decode, encode, total_cost)
from .decompose import CandidateSet, SlashburnParams, slashburn_decompose
from .graph import Graph, ParseError, VogError, induced_subgraph, load_edge_list
from .labeler import LabeledCandidate, label, label_candidates
from .pipeline import run_pipeline

__version__ = "0.1.0"
