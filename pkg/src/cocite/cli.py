"""Command-line interface.

Subcommands either operate on a single pair (pairs, detect, impact,
classify, distance, career) or on the whole cohort (ingest, stats, report,
run). synth writes a synthetic corpus with its ground truth. Options come
from defaults, then an optional key=value --config file, then explicit
flags, in that order.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields as dc_fields
from pathlib import Path

from . import __version__
from .community import DetectionConfig, detect_topics
from .corpus import ingest_corpus
from .distance import average_distance
from .errors import CociteError
from .impact import allocate_impact
from .pairgraph import build_pair_graph
from .pipeline import (
    PipelineConfig,
    apply_config_values,
    build_profiles,
    cohort_outputs,
    corpus_digest,
    assign_elites,
    load_config_file,
    run_pipeline,
    write_csv,
)
from .profiles import build_pair_profile
from .synth import SynthConfig, synthesize_corpus, write_corpus
from .topics import classify_strategy, classify_topics


def _add_corpus_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--papers", required=True, help="papers JSONL path")
    p.add_argument("--mentorships", required=True, help="mentorships JSONL path")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--min-papers", type=int, dest="min_papers")
    p.add_argument("--year-min", type=int, dest="year_min")
    p.add_argument("--year-max", type=int, dest="year_max")
    p.add_argument("--field", dest="field")


def _add_pair_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gamma", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--min-community-size", type=int, dest="min_community_size")
    p.add_argument(
        "--exclude-self-cocitation",
        action="store_const",
        const=True,
        dest="exclude_self_cocitation",
    )
    p.add_argument(
        "--exclude-joint-self-pairs",
        action="store_const",
        const=False,
        dest="include_joint_self_pairs",
    )
    p.add_argument("--citation-window", type=int, dest="citation_window")


def _add_cohort_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--top-fraction", type=float, dest="top_fraction")
    p.add_argument(
        "--elite-global", action="store_const", const=True, dest="elite_global"
    )
    p.add_argument("--n-bins", type=int, dest="n_bins")
    p.add_argument(
        "--log1p-outcome", action="store_const", const=True, dest="log1p_outcome"
    )
    p.add_argument(
        "--no-regression-30y",
        action="store_const",
        const=False,
        dest="regression_30y",
    )
    p.add_argument("--workers", type=int)


def _add_pair_selector(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mentor", required=True)
    p.add_argument("--mentee", required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cocite",
        description="Mentor-mentee co-citation topic analytics.",
    )
    parser.add_argument("--version", action="version", version=f"cocite {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="validate and filter a corpus")
    _add_corpus_flags(p_ingest)
    p_ingest.add_argument("--out", required=True, help="output directory")

    for name, helptext in (
        ("pairs", "build one pair's co-citation graph"),
        ("detect", "detect topics for one pair"),
        ("impact", "allocate topic impact for one pair"),
        ("classify", "type topics and classify one pair's strategy"),
        ("distance", "average mentee-mentor distance for one pair"),
        ("career", "career impact series for one pair"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_corpus_flags(p)
        _add_pair_flags(p)
        _add_pair_selector(p)
        p.add_argument("--out", required=True, help="output directory")

    for name, helptext in (
        ("stats", "cohort statistics from cached per-pair profiles"),
        ("report", "regenerate the full report bundle"),
        ("run", "full pipeline: ingest, pairs, stats, report"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_corpus_flags(p)
        _add_pair_flags(p)
        _add_cohort_flags(p)
        p.add_argument("--out", required=True, help="output directory")

    p_synth = sub.add_parser("synth", help="write a synthetic corpus with ground truth")
    p_synth.add_argument("--out", required=True, help="output directory")
    p_synth.add_argument("--pairs", type=int, default=8)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--p-in", type=float, default=0.9, dest="p_in")
    p_synth.add_argument("--p-out", type=float, default=0.02, dest="p_out")
    p_synth.add_argument("--fields", default="fieldA,fieldB")
    return parser


def config_from_args(args: argparse.Namespace) -> PipelineConfig:
    config = PipelineConfig(
        papers=args.papers,
        mentorships=args.mentorships,
        out=getattr(args, "out", ""),
    )
    if getattr(args, "config", None):
        apply_config_values(config, load_config_file(args.config))
    for f in dc_fields(PipelineConfig):
        if f.name in ("papers", "mentorships", "out"):
            continue
        value = getattr(args, f.name, None)
        if value is not None:
            setattr(config, f.name, value)
    return config


def _single_pair_chain(args: argparse.Namespace):
    config = config_from_args(args)
    result = ingest_corpus(config.papers, config.mentorships, config.ingest_config())
    graph = build_pair_graph(
        args.mentor,
        args.mentee,
        result.index,
        exclude_self_cocitation=config.exclude_self_cocitation,
    )
    return config, result.index, graph


def _cmd_ingest(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    result = ingest_corpus(config.papers, config.mentorships, config.ingest_config())
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result.report.write_csv(out / "ingest_report.csv")
    print(f"papers indexed: {result.index.n_papers}")
    print(f"mentorships kept: {len(result.mentorships)}")
    print(f"report: {out / 'ingest_report.csv'}")
    return 0


def _cmd_pairs(args: argparse.Namespace) -> int:
    _, _, graph = _single_pair_chain(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(
        out / "nodes.csv",
        ["paper_id", "authorship"],
        [(n, graph.labels[n].value) for n in graph.nodes],
    )
    write_csv(
        out / "edges.csv",
        ["u", "v", "n_sources", "sources"],
        [
            (u, v, len(srcs), ";".join(srcs))
            for (u, v), srcs in sorted(graph.cociting_sources.items())
        ],
    )
    print(f"nodes: {graph.n_nodes}  edges: {graph.n_edges}")
    return 0


def _cmd_detect(args: argparse.Namespace) -> int:
    config, _, graph = _single_pair_chain(args)
    assignment = detect_topics(
        graph,
        DetectionConfig(
            gamma=config.gamma,
            seed=config.seed,
            min_community_size=config.min_community_size,
        ),
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(
        out / "topics.csv",
        ["paper_id", "topic_id", "authorship"],
        [
            (n, assignment.topic_of[n], graph.labels[n].value)
            for n in graph.nodes
        ],
    )
    print(f"topics: {assignment.n_topics}  unassigned: {assignment.n_unassigned}")
    print(f"modularity_q: {assignment.modularity_q!r}")
    return 0


def _cmd_impact(args: argparse.Namespace) -> int:
    config, index, graph = _single_pair_chain(args)
    assignment = detect_topics(
        graph,
        DetectionConfig(
            gamma=config.gamma,
            seed=config.seed,
            min_community_size=config.min_community_size,
        ),
    )
    allocation = allocate_impact(graph, assignment, index)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(
        out / "impact.csv",
        ["topic_id", "paper_id", "authorship", "w", "s", "contribution"],
        [
            (t.topic_id, r.paper_id, r.authorship.value, r.w, r.author_count, r.contribution)
            for t in allocation.topics.values()
            for r in t.rows
        ],
    )
    write_csv(
        out / "impact_topics.csv",
        ["topic_id", "P_j_size", "C_e", "C_r"],
        [
            (t.topic_id, t.p_j_size, t.c_mentee, t.c_mentor)
            for t in allocation.topics.values()
        ],
    )
    print(f"C_e_total: {allocation.mentee_total!r}")
    print(f"C_r_total: {allocation.mentor_total!r}")
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    config, _, graph = _single_pair_chain(args)
    assignment = detect_topics(
        graph,
        DetectionConfig(
            gamma=config.gamma,
            seed=config.seed,
            min_community_size=config.min_community_size,
        ),
    )
    typing = classify_topics(graph, assignment)
    record = classify_strategy(typing)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(
        out / "topic_types.csv",
        ["topic_id", "topic_type", "mentor_proportion"],
        [
            (j, typing.type_of[j].value, typing.proportions.get(j))
            for j in sorted(typing.type_of)
        ],
    )
    write_csv(
        out / "strategy.csv",
        ["strategy", "n_shared", "n_new", "R"],
        [(record.strategy.value, record.n_shared, record.n_new, record.new_topic_ratio)],
    )
    print(f"strategy: {record.strategy.value}  R: {record.new_topic_ratio!r}")
    return 0


def _cmd_distance(args: argparse.Namespace) -> int:
    config, _, graph = _single_pair_chain(args)
    result = average_distance(
        graph, include_joint_self_pairs=config.include_joint_self_pairs
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(
        out / "distance.csv",
        ["ave_distance", "n_pairs", "n_disconnected", "max_finite_distance", "substituted"],
        [
            (
                result.ave_distance,
                result.n_pairs,
                result.n_disconnected,
                result.max_finite_distance,
                result.substituted,
            )
        ],
    )
    print(f"ave_distance: {result.ave_distance!r}")
    return 0


def _cmd_career(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    result = ingest_corpus(config.papers, config.mentorships, config.ingest_config())
    mentorship = next(
        (
            m
            for m in result.mentorships
            if m.mentor_id == args.mentor and m.mentee_id == args.mentee
        ),
        None,
    )
    if mentorship is None:
        from .corpus import MentorshipRecord

        mentorship = MentorshipRecord(args.mentor, args.mentee, None, config.field or "")
    profile = build_pair_profile(mentorship, result.index, config.pair_params())
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(
        out / "career.csv",
        ["role", "career_year", "yearly", "cumulative"],
        [
            (role, y, series.yearly[y], series.cumulative[y])
            for role, series in (("mentee", profile.mentee_series), ("mentor", profile.mentor_series))
            for y in range(len(series.yearly))
        ],
    )
    print(f"mentee total: {profile.mentee_total_impact!r}")
    print(f"mentor total: {profile.mentor_total_impact!r}")
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    result = ingest_corpus(config.papers, config.mentorships, config.ingest_config())
    corpus_hash = corpus_digest(config.papers, config.mentorships)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    stage = build_profiles(
        result.index, result.mentorships, config, corpus_hash, cache_dir=out / "cache"
    )
    assign_elites(stage.profiles, config)
    written = cohort_outputs(stage.profiles, config, out)
    print(f"profiles: {len(stage.profiles)}  failures: {len(stage.failures)}")
    print(f"cache hits: {stage.cache_hits}  misses: {stage.cache_misses}")
    print(f"wrote {len(written)} files to {out}")
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    result = run_pipeline(config)
    print(f"profiles: {result.n_profiles}  failures: {result.n_failures}")
    print(f"cache hits: {result.cache_hits}  misses: {result.cache_misses}")
    print(f"manifest: {result.manifest_path}")
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    corpus = synthesize_corpus(
        SynthConfig(
            n_pairs=args.pairs,
            seed=args.seed,
            p_in=args.p_in,
            p_out=args.p_out,
            fields=tuple(args.fields.split(",")),
        )
    )
    papers_path, mentorships_path, truth_path = write_corpus(corpus, args.out)
    print(f"papers: {papers_path}")
    print(f"mentorships: {mentorships_path}")
    print(f"ground truth: {truth_path}")
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "pairs": _cmd_pairs,
    "detect": _cmd_detect,
    "impact": _cmd_impact,
    "classify": _cmd_classify,
    "distance": _cmd_distance,
    "career": _cmd_career,
    "stats": _cmd_stats,
    "report": _cmd_run,
    "run": _cmd_run,
    "synth": _cmd_synth,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CociteError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
