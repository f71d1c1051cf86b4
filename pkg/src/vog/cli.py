"""``vog`` command line: summarize, decompose, label, cost, generate.

Exit codes: 0 ok, 1 usage, 2 I/O, 3 invalid data.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field

from .assembler import SummaryResult, parse_heuristics, rank_candidates, read_model, write_model
from .codec import CostReport, total_cost
from .decompose import (SlashburnParams, load_external_candidates, slashburn_decompose,
                        write_candidates)
from .generators import cavemen, erdos_renyi, planted, power_law
from .graph import Graph, VogError, load_edge_list, write_edge_list
from .labeler import label_candidates
from .pipeline import run_pipeline

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_DATA = 0, 1, 2, 3

log = logging.getLogger("vog")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class RunConfig:
    input: str
    candidates: str | None = None
    min_size: int = 10
    k: int | None = None
    seed: int = 0
    heuristics: str = "plain,top10,top100,gnf"
    gnf_cap: int = 500
    plain_include_all: bool = False
    output_model: str | None = None
    output_report: str | None = None
    one_based: bool = False
    verbosity: int = 0
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if not self.input:
            raise UsageError("--input is required")
        if self.min_size < 1:
            raise UsageError("--min-size must be positive")
        if self.k is not None and self.k < 1:
            raise UsageError("--k must be positive")
        if self.gnf_cap < 1:
            raise UsageError("--gnf-cap must be positive")


def _seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("VOG_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"VOG_SEED must be an integer, got {env!r}") from None


def _load_graph(path: str, one_based: bool = False) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh, base=1 if one_based else None)


def report_dict(g: Graph, result: SummaryResult | None, report: CostReport,
                heuristic: str | None = None) -> dict:
    out = {"nodes": g.n, "edges": g.m}
    if heuristic:
        out["heuristic"] = heuristic
    out.update(report.to_dict())
    if result is not None and result.runs:
        out["heuristics"] = {
            name: {"total_bits": r.total_bits, "ratio": r.ratio,
                   "unexplained_edge_fraction": r.unexplained_edge_fraction,
                   "n_structures": r.n_structures}
            for name, r in result.runs.items()
        }
    return out


def _histogram(report: CostReport) -> str:
    return " ".join(f"{k}:{v}" for k, v in report.counts.items() if v) or "-"


def cmd_summarize(cfg: RunConfig) -> int:
    cfg.validate()
    try:
        heuristics = parse_heuristics(cfg.heuristics, cfg.gnf_cap, cfg.plain_include_all)
    except VogError as exc:
        raise UsageError(str(exc)) from None
    g = _load_graph(cfg.input, cfg.one_based)
    cands = None
    if cfg.candidates:
        with open(cfg.candidates, encoding="utf-8") as fh:
            cands = load_external_candidates(fh, g, cfg.min_size)
    params = SlashburnParams(k=cfg.k, min_size=cfg.min_size)
    result = run_pipeline(g, cands, params, cfg.seed, heuristics)
    rep = report_dict(g, result, result.report, result.heuristic)
    if cfg.output_model:
        with open(cfg.output_model, "w", encoding="utf-8") as fh:
            write_model(result.model, g, fh, [f"heuristic {result.heuristic}",
                                              f"total_bits {result.report.total_bits:.6f}"])
    if cfg.output_report:
        with open(cfg.output_report, "w", encoding="utf-8") as fh:
            json.dump(rep, fh, indent=2)
            fh.write("\n")
    print(f"ratio {result.report.ratio:.4f}  |M|={len(result.model)}  "
          f"{_histogram(result.report)}  ({result.heuristic})")
    return EXIT_OK


def cmd_decompose(args) -> int:
    g = _load_graph(args.input, args.one_based)
    cands = slashburn_decompose(g, SlashburnParams(k=args.k, min_size=args.min_size,
                                                   gcc_stop=args.gcc_stop))
    with open(args.output, "w", encoding="utf-8") as fh:
        write_candidates(cands, g, fh)
    print(f"{len(cands)} candidates")
    return EXIT_OK


def cmd_label(args) -> int:
    g = _load_graph(args.input, args.one_based)
    with open(args.candidates, encoding="utf-8") as fh:
        cands = load_external_candidates(fh, g, args.min_size)
    labeled = rank_candidates(label_candidates(g, cands, _seed(args.seed)))
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(f"# {len(labeled)} labelled candidates, benefit-descending\n")
        for lc in labeled:
            fh.write(f"# benefit {lc.benefit:.6f} local_cost {lc.local_cost:.6f}\n")
            write_model([lc.structure], g, fh)
    print(f"{len(labeled)} labelled candidates")
    return EXIT_OK


def cmd_cost(args) -> int:
    g = _load_graph(args.input, args.one_based)
    with open(args.model, encoding="utf-8") as fh:
        model = read_model(fh, g)
    report = total_cost(g, model)
    rep = report_dict(g, None, report)
    text = json.dumps(rep, indent=2)
    if args.output_report:
        with open(args.output_report, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.kind == "cavemen":
        g = cavemen().graph
    elif args.kind == "er":
        g = erdos_renyi(args.n, args.p, args.seed)
    elif args.kind == "powerlaw":
        g = power_law(args.n, args.m, args.exponent, args.seed)
    else:
        plants = []
        for item in args.plant or []:
            kind, _, size = item.partition(":")
            if not size.isdigit():
                raise UsageError(f"--plant expects kind:size, got {item!r}")
            plants.append((kind, int(size)))
        g = planted(args.n, plants, args.p, args.seed).graph
    with open(args.output, "w", encoding="utf-8") as fh:
        write_edge_list(g, fh)
    print(f"{g.n} nodes, {g.m} edges -> {args.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vog", description="Vocabulary-based graph summarization")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_args(sp):
        sp.add_argument("--input", required=True)
        sp.add_argument("--one-based", action="store_true",
                        help="read integer labels and index them from 1")

    s = sub.add_parser("summarize", help="full pipeline")
    graph_args(s)
    s.add_argument("--candidates")
    s.add_argument("--min-size", type=int, default=10)
    s.add_argument("--k", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--heuristics", default="plain,top10,top100,gnf")
    s.add_argument("--gnf-cap", type=int, default=500)
    s.add_argument("--plain-include-all", action="store_true")
    s.add_argument("--output-model")
    s.add_argument("--output-report")

    s = sub.add_parser("decompose", help="SlashBurn candidates")
    graph_args(s)
    s.add_argument("--k", type=int)
    s.add_argument("--min-size", type=int, default=10)
    s.add_argument("--gcc-stop", type=int)
    s.add_argument("--output", required=True)

    s = sub.add_parser("label", help="label a candidate file")
    graph_args(s)
    s.add_argument("--candidates", required=True)
    s.add_argument("--min-size", type=int, default=1)
    s.add_argument("--seed", type=int)
    s.add_argument("--output", required=True)

    s = sub.add_parser("cost", help="cost a given model file")
    graph_args(s)
    s.add_argument("--model", required=True)
    s.add_argument("--output-report")

    s = sub.add_parser("generate", help="write a synthetic edge list")
    s.add_argument("kind", choices=["cavemen", "planted", "er", "powerlaw"])
    s.add_argument("--n", type=int, default=1000)
    s.add_argument("--p", type=float, default=0.0)
    s.add_argument("--m", type=int, default=10000)
    s.add_argument("--exponent", type=float, default=2.5)
    s.add_argument("--plant", action="append", help="kind:size, repeatable")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--output", required=True)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                            format="%(levelname)s %(name)s: %(message)s")
        if args.command == "summarize":
            cfg = RunConfig(args.input, args.candidates, args.min_size, args.k, _seed(args.seed),
                            args.heuristics, args.gnf_cap, args.plain_include_all,
                            args.output_model, args.output_report, args.one_based, args.verbose)
            return cmd_summarize(cfg)
        return {"decompose": cmd_decompose, "label": cmd_label, "cost": cmd_cost,
                "generate": cmd_generate}[args.command](args)
    except UsageError as exc:
        print(f"vog: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"vog: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except VogError as exc:
        print(f"vog: invalid data: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
