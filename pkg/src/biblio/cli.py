"""Command-line interface: one indicator per invocation, batch only.

Data goes to standard output (or ``--out``), diagnostics to standard error.
Exit codes: 0 success, 2 usage or validation problems (including strict-mode
load failures), 3 computation errors such as a cited paper over a zero
baseline. Output is byte-stable: JSON is emitted with sorted keys and compact
separators, and every number that started life as a rational is rendered as
both ``num/den`` and a rounded decimal. Flag combinations are validated before
any corpus is read.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

import yaml

from . import excellence, normalization, ranking, synthesis
from .corpus import Corpus, validate
from .errors import ComputationError, LoadError
from .io import dump_corpus, load_corpus
from .rounding import rational_json, rational_str


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n"


def _emit(text: str, args) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fail(message: str) -> int:
    print(f"biblio: error: {message}", file=sys.stderr)
    return 2


def _corpus_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--journals", required=True, help="journals file (JSONL or CSV)")
    p.add_argument("--papers", required=True, help="papers file (JSONL or CSV)")
    p.add_argument("--edges", help="citation edges file (JSONL or CSV)")
    p.add_argument(
        "--strict", action="store_true",
        help="abort on the first contract violation instead of dropping rows",
    )


def _output_options(p: argparse.ArgumentParser, formats=("json",)) -> None:
    p.add_argument("--out", help="write results to this file instead of standard output")
    p.add_argument(
        "--format", choices=list(formats), default=formats[0],
        help="output format",
    )


def _slice_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--years", type=_int_list, help="comma-separated publication years")
    p.add_argument("--doc-types", type=_str_list, help="comma-separated document types")


def _hcp_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--top-percent", default="1", help="selectivity, percent (exact rational)")
    p.add_argument(
        "--method",
        choices=["inclusive", "exclusive", "fractional-ws", "quota"],
        default="inclusive",
        help="borderline handling",
    )
    p.add_argument(
        "--tiebreak", type=_str_list, default=[],
        help="comma-separated chain: chronology, trajectory, citing-excellence",
    )
    p.add_argument(
        "--no-esi-low-threshold", action="store_true",
        help="disable the rule that a threshold of 2 or fewer citations selects nothing",
    )


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _str_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _load(args) -> Corpus:
    return load_corpus(args.journals, args.papers, args.edges, strict=args.strict)


def _ids_from_file(path: str) -> list[str]:
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise LoadError(f"cannot read id list {path!r}: {exc}") from exc
    return [line.strip() for line in lines if line.strip()]


def _papers_by_ids(corpus: Corpus, ids, what: str):
    papers = []
    for pid in ids:
        paper = corpus.papers.get(pid)
        if paper is None:
            raise LoadError(f"{what}: unknown paper id {pid!r}")
        papers.append(paper)
    return papers


# -- subcommand handlers ---------------------------------------------------------


def _cmd_validate(args) -> int:
    corpus = _load(args)
    report = validate(corpus)
    load_report = corpus.load_report
    ok = report.ok and (load_report is None or load_report.clean)
    payload = {
        "ok": ok,
        "validation": report.to_json_dict(),
        "load": load_report.to_json_dict() if load_report is not None else None,
    }
    _emit(_json_text(payload), args)
    if not ok:
        print("biblio: corpus has validation findings", file=sys.stderr)
        return 2
    return 0


def _cmd_rank(args) -> int:
    corpus = _load(args)
    result = ranking.rank_category(corpus, args.schema, args.category, args.year)
    labels = ranking.assign_quartiles(result)
    ties = ranking.boundary_ties(result)
    if args.format == "csv":
        lines = ["journal,metric,rank,quartile,percentile"]
        for e in result.entries:
            pct = ranking.percentile(e.rank, result.n)
            lines.append(
                f"{e.journal_id},{rational_str(e.metric)},{e.rank},"
                f"{labels[e.journal_id]},{ranking.decimal_str(pct, 1)}"
            )
        _emit("\n".join(lines) + "\n", args)
        return 0
    payload = {
        "schema": result.schema,
        "category": result.category,
        "year": result.year,
        "n": result.n,
        "entries": [
            {
                "journal": e.journal_id,
                "metric": rational_json(e.metric, 3),
                "rank": e.rank,
                "quartile": str(labels[e.journal_id]),
                "percentile": rational_json(ranking.percentile(e.rank, result.n), 1),
            }
            for e in result.entries
        ],
        "excluded": list(result.excluded),
        "ties_at_cuts": [
            {"rank": t.rank, "size": t.size, "label": str(t.label)} for t in ties
        ],
    }
    _emit(_json_text(payload), args)
    return 0


def _cmd_percentile(args) -> int:
    corpus = _load(args)
    cats = corpus.categories_of(args.journal, args.schema)
    if not cats:
        raise ComputationError(
            f"journal {args.journal!r} has no categories under {args.schema!r}"
        )
    per_category = {}
    for cat in cats:
        result = ranking.rank_category(corpus, args.schema, cat, args.year)
        rank = result.rank_of(args.journal)
        per_category[cat] = {
            "rank": rank,
            "n": result.n,
            "percentile": rational_json(ranking.percentile(rank, result.n), 1),
        }
    average = ranking.average_percentile(corpus, args.schema, args.journal, args.year)
    payload = {
        "schema": args.schema,
        "journal": args.journal,
        "year": args.year,
        "per_category": per_category,
        "average": rational_json(average, 1),
    }
    _emit(_json_text(payload), args)
    return 0


def _cmd_quartiles(args) -> int:
    corpus = _load(args)
    report = ranking.quartile_distribution(
        corpus,
        args.schema,
        args.year,
        level=args.level,
        mode=args.mode.replace("-", "_"),
        min_category_size=args.min_category_size,
    )
    if args.format == "csv":
        _emit(report.to_csv_text(), args)
    else:
        _emit(_json_text(report.to_json_dict()), args)
    return 0


def _cmd_baselines(args) -> int:
    if args.split_citations and args.counting != "whole":
        return _fail("--split-citations requires whole counting")
    corpus = _load(args)
    table = normalization.compute_baselines(
        corpus, args.schema, args.counting, split_citations=args.split_citations
    )
    if args.years is not None or args.doc_types is not None:
        ys = set(args.years) if args.years is not None else None
        ts = set(args.doc_types) if args.doc_types is not None else None
        cells = {
            k: v
            for k, v in table.cells.items()
            if (ys is None or k.year in ys) and (ts is None or k.doc_type in ts)
        }
        table = normalization.BaselineTable(
            schema=table.schema,
            counting=table.counting,
            split_citations=table.split_citations,
            cells=cells,
        )
    if args.format == "csv":
        _emit(table.to_csv_text(), args)
        return 0
    payload = {
        "schema": table.schema,
        "counting": table.counting_label,
        "cells": [
            {
                "cell": key.as_dict(),
                "expected": rational_json(cell.expected, 4),
                "weight": rational_str(cell.weight),
                "papers": cell.papers,
            }
            for key, cell in sorted(table.cells.items())
        ],
    }
    _emit(_json_text(payload), args)
    return 0


def _cmd_cnci(args) -> int:
    if args.split_citations and args.aggregation != "roa":
        return _fail("split-citations requires --aggregation roa")
    if args.split_citations and args.counting != "whole":
        return _fail("--split-citations requires whole counting")
    corpus = _load(args)
    config = normalization.CnciConfig(
        counting=args.counting,
        aggregation=args.aggregation,
        split_citations=args.split_citations,
    )
    papers = normalization._slice(corpus, args.schema, args.years, args.doc_types)
    value = normalization.global_cnci(
        corpus, args.schema, config, args.years, args.doc_types
    )
    payload = {
        "schema": args.schema,
        "counting": config.counting,
        "aggregation": config.aggregation,
        "split_citations": config.split_citations,
        "papers": len(papers),
        "value": rational_json(value, 4),
    }
    if args.per_paper:
        baselines = normalization.compute_baselines(
            corpus, args.schema, config.counting, split_citations=config.split_citations
        )
        payload["per_paper"] = {
            p.id: rational_json(normalization.cnci_paper(corpus, p, baselines), 4)
            for p in papers
        }
    _emit(_json_text(payload), args)
    return 0


def _cmd_relative_cnci(args) -> int:
    if not args.subunit_entity and not args.subunit_ids:
        return _fail("relative-cnci needs --subunit-entity or --subunit-ids")
    corpus = _load(args)
    if args.subunit_entity:
        subunit = list(corpus.papers_of_entity(args.subunit_entity))
    else:
        subunit = _papers_by_ids(corpus, _ids_from_file(args.subunit_ids), "--subunit-ids")
    if args.reference_entity:
        reference = list(corpus.papers_of_entity(args.reference_entity))
    elif args.reference_ids:
        reference = _papers_by_ids(
            corpus, _ids_from_file(args.reference_ids), "--reference-ids"
        )
    else:
        reference = normalization._slice(corpus, args.schema, args.years, args.doc_types)

    corpus_baselines = normalization.compute_baselines(corpus, args.schema, args.counting)
    subunit_cnci = normalization.cnci_set(corpus, subunit, corpus_baselines)
    reference_cnci = normalization.cnci_set(corpus, reference, corpus_baselines)
    relative = normalization.relative_cnci(
        corpus, subunit, reference, args.schema, args.counting
    )
    payload = {
        "schema": args.schema,
        "counting": args.counting,
        "subunit": {"papers": len(subunit), "cnci": rational_json(subunit_cnci, 4)},
        "reference": {"papers": len(reference), "cnci": rational_json(reference_cnci, 4)},
        "cnci_ratio": rational_json(subunit_cnci / reference_cnci, 4),
        "relative_cnci": rational_json(relative, 4),
    }
    _emit(_json_text(payload), args)
    return 0


def _hcp_decisions(corpus: Corpus, args):
    method = args.method.replace("-", "_")
    chain = excellence.parse_tiebreak_chain(args.tiebreak)
    if method == "quota" and not chain:
        raise _UsageError("--method quota requires a --tiebreak chain")
    if method != "quota" and chain:
        raise _UsageError("--tiebreak applies to --method quota only")
    return excellence.hcp_run(
        corpus,
        args.schema,
        top_percent=Fraction(args.top_percent),
        method=method,
        esi_low_threshold=not args.no_esi_low_threshold,
        tiebreak_chain=chain,
        years=args.years,
        doc_types=args.doc_types,
    )


class _UsageError(Exception):
    pass


def _cmd_hcp(args) -> int:
    corpus = _load(args)
    decisions = _hcp_decisions(corpus, args)
    cells = [
        excellence.compute_threshold(
            corpus, cell, papers, Fraction(args.top_percent)
        ).to_json_dict()
        for cell, papers in corpus.cells(args.schema, args.years, args.doc_types).items()
    ]
    total = sum((d.weight for d in decisions), Fraction(0))
    payload = {
        "schema": args.schema,
        "top_percent": rational_str(Fraction(args.top_percent)),
        "method": args.method,
        "esi_low_threshold": not args.no_esi_low_threshold,
        "tiebreak": list(args.tiebreak),
        "cells": cells,
        "decisions": [d.to_json_dict() for d in decisions],
        "total_weight": rational_json(total, 2),
    }
    _emit(_json_text(payload), args)
    return 0


def _cmd_hcp_report(args) -> int:
    corpus = _load(args)
    decisions = _hcp_decisions(corpus, args)
    report = excellence.hcp_report(
        corpus,
        args.schema,
        decisions,
        top_percent=Fraction(args.top_percent),
        years=args.years,
        doc_types=args.doc_types,
    )
    if args.format == "csv":
        _emit(report.to_csv_text(), args)
    else:
        _emit(_json_text(report.to_json_dict()), args)
    return 0


def _cmd_entity_share(args) -> int:
    corpus = _load(args)
    decisions = _hcp_decisions(corpus, args)
    share = excellence.entity_hcp_share(corpus, args.entity, decisions, args.counting)
    payload = share.to_json_dict()
    payload["top_percent"] = rational_str(Fraction(args.top_percent))
    payload["method"] = args.method
    _emit(_json_text(payload), args)
    return 0


def _cmd_simulate(args) -> int:
    try:
        raw = yaml.safe_load(Path(args.config).read_text(encoding="utf-8"))
    except OSError as exc:
        return _fail(f"cannot read --config {args.config!r}: {exc}")
    except yaml.YAMLError as exc:
        return _fail(f"--config {args.config!r} is not valid YAML/JSON: {exc}")
    try:
        config = synthesis.GenConfig.from_dict(raw or {})
    except (KeyError, TypeError, ValueError, ComputationError) as exc:
        return _fail(f"--config {args.config!r}: {exc}")
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    if args.experiment == "corpus" and out_dir is None:
        return _fail("--experiment corpus requires --out-dir")

    if args.experiment == "corpus":
        corpus = synthesis.generate_corpus(config)
        dump_corpus(corpus, out_dir / "journals.jsonl", out_dir / "papers.jsonl")
        report = validate(corpus)
        summary = {
            "experiment": "corpus",
            "config": config.to_dict(),
            "journals": len(corpus.journals),
            "papers": len(corpus.papers),
            "validation": report.to_json_dict(),
            "files": {"journals": "journals.jsonl", "papers": "papers.jsonl"},
        }
        trial_lines = None
    elif args.experiment == "surplus":
        result = synthesis.monte_carlo_surplus(config, args.trials)
        summary = {
            "experiment": "surplus",
            "config": config.to_dict(),
            "trials": result.trials,
            "analytic_extras": list(result.analytic_extras),
            "mean_extras": [rational_json(m, 3) for m in result.mean_extras],
            "se_extras": [None if s is None else f"{s:.6g}" for s in result.se_extras],
            "mean_totals": [rational_json(m, 3) for m in result.mean_totals],
            "se_totals": [None if s is None else f"{s:.6g}" for s in result.se_totals],
            "flagged": list(result.flagged),
            "agrees": result.agrees,
        }
        trial_lines = ["trial,q1,q2,q3,q4"]
        for t, row in enumerate(result.per_trial_totals):
            trial_lines.append(f"{t},{row[0]},{row[1]},{row[2]},{row[3]}")
    else:
        result = synthesis.monte_carlo_global_cnci(config, args.trials)
        summary = {
            "experiment": "cnci",
            "config": config.to_dict(),
            "trials": result.trials,
            "regimes": {
                name: {
                    "min": rational_json(stats.minimum, 4),
                    "mean": rational_json(stats.mean, 4),
                    "max": rational_json(stats.maximum, 4),
                    "pinned": stats.pinned,
                    "violations": stats.violations,
                }
                for name, stats in sorted(result.regimes.items())
            },
            "all_pins_hold": result.all_pins_hold,
        }
        trial_lines = None

    text = _json_text(summary)
    if out_dir is not None:
        (out_dir / "summary.json").write_text(text, encoding="utf-8")
        if trial_lines is not None:
            (out_dir / "trials.csv").write_text(
                "\n".join(trial_lines) + "\n", encoding="utf-8"
            )
    sys.stdout.write(text)
    return 0


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biblio",
        description="Bibliometric indicators: rankings, baselines, CNCI, "
        "highly cited papers, and synthetic-corpus experiments.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    p = sub.add_parser("validate", help="check a corpus against every structural invariant")
    _corpus_options(p)
    p.add_argument("--out", help="write results to this file instead of standard output")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("rank", help="rank one category's journals by their yearly metric")
    _corpus_options(p)
    p.add_argument("--schema", required=True)
    p.add_argument("--category", required=True)
    p.add_argument("--year", type=int, required=True)
    _output_options(p, ("json", "csv"))
    p.set_defaults(handler=_cmd_rank)

    p = sub.add_parser("percentile", help="percentile position of a journal per category")
    _corpus_options(p)
    p.add_argument("--schema", required=True)
    p.add_argument("--journal", required=True)
    p.add_argument("--year", type=int, required=True)
    _output_options(p)
    p.set_defaults(handler=_cmd_percentile)

    p = sub.add_parser("quartiles", help="distribution of journals or papers over quartiles")
    _corpus_options(p)
    p.add_argument("--schema", required=True)
    p.add_argument("--year", type=int, required=True)
    p.add_argument("--level", choices=["journals", "papers"], default="journals")
    p.add_argument("--mode", choices=["per-category", "database-best"], default="per-category")
    p.add_argument(
        "--min-category-size", type=int, default=0,
        help="skip categories with fewer ranked journals (0 = off)",
    )
    _output_options(p, ("json", "csv"))
    p.set_defaults(handler=_cmd_quartiles)

    p = sub.add_parser("baselines", help="expected citation rates per (field, year, type) cell")
    _corpus_options(p)
    p.add_argument("--schema", required=True)
    p.add_argument("--counting", choices=["whole", "fractional"], default="whole")
    p.add_argument(
        "--split-citations", action="store_true",
        help="split citations across fields while counting papers whole",
    )
    _slice_options(p)
    _output_options(p, ("json", "csv"))
    p.set_defaults(handler=_cmd_baselines)

    p = sub.add_parser("cnci", help="global normalized citation impact of a corpus slice")
    _corpus_options(p)
    p.add_argument("--schema", required=True)
    p.add_argument("--counting", choices=["whole", "fractional"], default="whole")
    p.add_argument("--aggregation", choices=["aor", "roa"], default="aor")
    p.add_argument(
        "--split-citations", action="store_true",
        help="split citations across fields (ratio-of-averages with whole counting only)",
    )
    p.add_argument("--per-paper", action="store_true", help="include per-paper values")
    _slice_options(p)
    _output_options(p)
    p.set_defaults(handler=_cmd_cnci)

    p = sub.add_parser(
        "relative-cnci", help="impact of a subunit normalized by a reference set's baselines"
    )
    _corpus_options(p)
    p.add_argument("--schema", required=True)
    p.add_argument("--counting", choices=["whole", "fractional"], default="whole")
    p.add_argument("--subunit-entity", help="subunit = papers attributed to this entity")
    p.add_argument("--subunit-ids", help="file with one subunit paper id per line")
    p.add_argument("--reference-entity", help="reference = papers attributed to this entity")
    p.add_argument("--reference-ids", help="file with one reference paper id per line")
    _slice_options(p)
    _output_options(p)
    p.set_defaults(handler=_cmd_relative_cnci)

    p = sub.add_parser("hcp", help="highly cited paper thresholds and decisions per cell")
    _corpus_options(p)
    p.add_argument("--schema", required=True)
    _hcp_options(p)
    _slice_options(p)
    _output_options(p)
    p.set_defaults(handler=_cmd_hcp)

    p = sub.add_parser("hcp-report", help="per-field expected vs actual excellence table")
    _corpus_options(p)
    p.add_argument("--schema", required=True)
    _hcp_options(p)
    _slice_options(p)
    _output_options(p, ("json", "csv"))
    p.set_defaults(handler=_cmd_hcp_report)

    p = sub.add_parser("entity-share", help="share of an entity's output that is highly cited")
    _corpus_options(p)
    p.add_argument("--schema", required=True)
    p.add_argument("--entity", required=True)
    p.add_argument("--counting", choices=["whole", "fractional"], default="whole")
    _hcp_options(p)
    _slice_options(p)
    _output_options(p)
    p.set_defaults(handler=_cmd_entity_share)

    p = sub.add_parser("simulate", help="synthetic corpora and Monte Carlo experiments")
    p.add_argument("--config", required=True, help="generator config file (YAML or JSON)")
    p.add_argument(
        "--experiment", choices=["surplus", "cnci", "corpus"], required=True,
        help="surplus: quartile imbalance; cnci: global mean per regime; corpus: emit files",
    )
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--out-dir", help="directory for per-trial CSV, summary JSON, corpus files")
    p.set_defaults(handler=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING, format="biblio: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else (0 if code is None else 2)
    try:
        return args.handler(args)
    except _UsageError as exc:
        return _fail(str(exc))
    except LoadError as exc:
        print(f"biblio: load error: {exc}", file=sys.stderr)
        return 2
    except ComputationError as exc:
        print(f"biblio: computation error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
