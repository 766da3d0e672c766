"""Cohort pipeline: ingest, per-pair profiles with caching, cohort
statistics, and a deterministic report bundle.

Every output file is byte-stable for a given corpus and configuration:
rows are fully sorted, floats are written with repr, and nothing volatile
(timestamps, absolute paths, cache statistics) lands in hashed outputs.
Cache statistics go to run_stats.json, which the manifest does not cover.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields as dc_fields
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import __version__
from .career import cohort_average_series
from .corpus import CitationIndex, IngestConfig, MentorshipRecord, ingest_corpus
from .errors import CociteError, InvalidConfig, ZeroImpact
from .profiles import PairParams, PairProfile, build_pair_profile
from .stats import (
    ccdf,
    equal_count_bins,
    fit_model_ladder,
    fit_quadratic,
    quadrant_counts,
    ternary_shares,
)
from .topics import TopicType, flag_elites, is_outperforming

# ---------------------------------------------------------------------------
# configuration


@dataclass
class PipelineConfig:
    papers: str = ""
    mentorships: str = ""
    out: str = ""

    min_papers: int = 20
    year_min: int = 1960
    year_max: int = 2021
    field: str | None = None

    gamma: float = 1.0
    seed: int = 0
    min_community_size: int = 10
    exclude_self_cocitation: bool = False
    include_joint_self_pairs: bool = True
    citation_window: int = 5

    top_fraction: float = 0.2
    elite_global: bool = False
    n_bins: int = 20
    log1p_outcome: bool = False
    regression_30y: bool = True

    workers: int = 1

    # Fields that never influence results and stay out of the config hash.
    _VOLATILE = ("papers", "mentorships", "out", "workers")

    def ingest_config(self) -> IngestConfig:
        return IngestConfig(
            min_papers=self.min_papers,
            year_min=self.year_min,
            year_max=self.year_max,
            field=self.field,
        )

    def pair_params(self) -> PairParams:
        return PairParams(
            gamma=self.gamma,
            seed=self.seed,
            min_community_size=self.min_community_size,
            exclude_self_cocitation=self.exclude_self_cocitation,
            include_joint_self_pairs=self.include_joint_self_pairs,
            citation_window=self.citation_window,
        )

    def analysis_items(self) -> list[tuple[str, object]]:
        items = []
        for f in dc_fields(self):
            if f.name in self._VOLATILE:
                continue
            items.append((f.name, getattr(self, f.name)))
        return sorted(items)

    def config_hash(self) -> str:
        canon = json.dumps(self.analysis_items(), sort_keys=True)
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def load_config_file(path: str | Path) -> dict[str, str]:
    """key=value lines; blank lines and # comments ignored."""
    out: dict[str, str] = {}
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidConfig(f"line {line_no}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def apply_config_values(config: PipelineConfig, values: Mapping[str, str]) -> None:
    """Overlay string key=value settings onto a config, with type coercion."""
    types = {f.name: f.type for f in dc_fields(PipelineConfig)}
    for key, raw in values.items():
        if key.startswith("_") or key not in types:
            raise InvalidConfig(f"unknown config key {key!r}")
        ann = types[key]
        if raw.lower() in ("none", "null"):
            value: object = None
        elif "bool" in str(ann):
            if raw.lower() in ("true", "1", "yes"):
                value = True
            elif raw.lower() in ("false", "0", "no"):
                value = False
            else:
                raise InvalidConfig(f"config key {key!r}: bad boolean {raw!r}")
        elif "int" in str(ann):
            value = int(raw)
        elif "float" in str(ann):
            value = float(raw)
        else:
            value = raw
        setattr(config, key, value)


# ---------------------------------------------------------------------------
# formatting


def _fmt(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def file_digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


# ---------------------------------------------------------------------------
# per-pair stage with caching


def corpus_digest(papers_path: str | Path, mentorships_path: str | Path) -> str:
    h = hashlib.sha256()
    h.update(Path(papers_path).read_bytes())
    h.update(b"\x00")
    h.update(Path(mentorships_path).read_bytes())
    return h.hexdigest()


def pair_cache_key(corpus_hash: str, mentorship: MentorshipRecord, params: PairParams) -> str:
    blob = json.dumps(
        {
            "corpus": corpus_hash,
            "mentor": mentorship.mentor_id,
            "mentee": mentorship.mentee_id,
            "params": params.to_dict(),
        },
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


_FAILURE_STAGE = {
    "EmptyPair": "pairs",
    "UnknownAuthor": "pairs",
    "NoRetainedTopics": "detect",
    "MenteeNoTopics": "classify",
}

_WORKER_INDEX: CitationIndex | None = None
_WORKER_PARAMS: PairParams | None = None


def _init_worker(papers: str, mentorships: str, ingest_cfg: IngestConfig, params: PairParams) -> None:
    global _WORKER_INDEX, _WORKER_PARAMS
    result = ingest_corpus(papers, mentorships, ingest_cfg)
    _WORKER_INDEX = result.index
    _WORKER_PARAMS = params


def _worker_build(mentorship: MentorshipRecord) -> tuple[str, str, bool, dict | tuple[str, str]]:
    try:
        profile = build_pair_profile(mentorship, _WORKER_INDEX, _WORKER_PARAMS)
        return mentorship.mentor_id, mentorship.mentee_id, True, profile.to_dict()
    except CociteError as exc:
        stage = _FAILURE_STAGE.get(type(exc).__name__, "profile")
        return mentorship.mentor_id, mentorship.mentee_id, False, (stage, str(exc))


@dataclass
class PairStageResult:
    profiles: list[PairProfile]
    failures: list[tuple[str, str, str, str]]
    cache_hits: int
    cache_misses: int


def build_profiles(
    index: CitationIndex,
    mentorships: Sequence[MentorshipRecord],
    config: PipelineConfig,
    corpus_hash: str,
    cache_dir: Path | None,
) -> PairStageResult:
    """Per-pair stage with fault isolation and an optional JSON cache.

    Output order is (field, mentor_id, mentee_id) regardless of worker
    scheduling.
    """
    params = config.pair_params()
    ordered = sorted(mentorships, key=lambda m: (m.field, m.mentor_id, m.mentee_id))
    profiles: list[PairProfile] = []
    failures: list[tuple[str, str, str, str]] = []
    hits = 0
    misses = 0

    pending: list[MentorshipRecord] = []
    cached: dict[tuple[str, str], PairProfile] = {}
    if cache_dir is not None:
        cache_dir.mkdir(parents=True, exist_ok=True)
    for m in ordered:
        if cache_dir is not None:
            path = cache_dir / f"{pair_cache_key(corpus_hash, m, params)}.json"
            if path.exists():
                cached[(m.mentor_id, m.mentee_id)] = PairProfile.from_dict(
                    json.loads(path.read_text(encoding="utf-8"))
                )
                hits += 1
                continue
        pending.append(m)
        misses += 1

    built: dict[tuple[str, str], PairProfile] = {}
    failed: dict[tuple[str, str], tuple[str, str]] = {}
    if pending:
        if config.workers > 1:
            with ProcessPoolExecutor(
                max_workers=config.workers,
                initializer=_init_worker,
                initargs=(config.papers, config.mentorships, config.ingest_config(), params),
            ) as pool:
                results = list(pool.map(_worker_build, pending))
        else:
            results = []
            for m in pending:
                try:
                    profile = build_pair_profile(m, index, params)
                    results.append((m.mentor_id, m.mentee_id, True, profile.to_dict()))
                except CociteError as exc:
                    stage = _FAILURE_STAGE.get(type(exc).__name__, "profile")
                    results.append((m.mentor_id, m.mentee_id, False, (stage, str(exc))))
        for mentor_id, mentee_id, ok, payload in results:
            if ok:
                built[(mentor_id, mentee_id)] = PairProfile.from_dict(payload)
            else:
                failed[(mentor_id, mentee_id)] = payload

    for m in ordered:
        key = (m.mentor_id, m.mentee_id)
        if key in cached:
            profiles.append(cached[key])
        elif key in built:
            profile = built[key]
            profiles.append(profile)
            if cache_dir is not None:
                path = cache_dir / f"{pair_cache_key(corpus_hash, m, params)}.json"
                path.write_text(
                    json.dumps(profile.to_dict(), sort_keys=True), encoding="utf-8"
                )
        else:
            stage, reason = failed[key]
            failures.append((m.mentor_id, m.mentee_id, stage, reason))
    return PairStageResult(
        profiles=profiles, failures=failures, cache_hits=hits, cache_misses=misses
    )


# ---------------------------------------------------------------------------
# cohort stage


def assign_elites(profiles: Sequence[PairProfile], config: PipelineConfig) -> None:
    """Fill in elite and outperforming flags across the cohort, in place."""
    if not profiles:
        return
    totals = {p.mentee_id: float(p.mentee_citation_total) for p in profiles}
    fields = None if config.elite_global else {p.mentee_id: p.field for p in profiles}
    flags = flag_elites(totals, fields, top_fraction=config.top_fraction)
    for p in profiles:
        p.is_elite = flags[p.mentee_id]
        p.outperforming = is_outperforming(
            p.is_elite, p.mentee_total_impact, p.mentor_total_impact
        )


_PROFILE_COLUMNS: tuple[tuple[str, str], ...] = (
    ("field", "field"),
    ("mentor_id", "mentor_id"),
    ("mentee_id", "mentee_id"),
    ("n_nodes", "n_nodes"),
    ("n_edges", "n_edges"),
    ("n_topics", "n_topics"),
    ("n_unassigned", "n_unassigned"),
    ("modularity_q", "modularity_q"),
    ("strategy", "strategy"),
    ("n_shared", "n_shared"),
    ("n_new", "n_new"),
    ("R", "new_topic_ratio"),
    ("ave_distance", "ave_distance"),
    ("ave_distance_sq", "ave_distance_sq"),
    ("n_distance_pairs", "n_distance_pairs"),
    ("n_disconnected", "n_disconnected"),
    ("distance_substituted", "distance_substituted"),
    ("distance_failed", "distance_failed"),
    ("C_e_total", "mentee_total_impact"),
    ("C_r_total", "mentor_total_impact"),
    ("zero_impact", "zero_impact"),
    ("mentee_citation_total", "mentee_citation_total"),
    ("mentor_citation_total", "mentor_citation_total"),
    ("first_pub_year_mte", "first_pub_year_mte"),
    ("first_pub_year_mto", "first_pub_year_mto"),
    ("career_len_mte", "career_len_mte"),
    ("career_len_mto", "career_len_mto"),
    ("pre_1990_mte", "pre_1990_mte"),
    ("career_30y_mte", "career_30y_mte"),
    ("colla_work_count", "colla_work_count"),
    ("colla_work_count_first_5y", "colla_work_count_first_5y"),
    ("colla_work_count_later", "colla_work_count_later"),
    ("common_collaborators_count", "common_collaborators_count"),
    ("mte_work_count_first_5y", "mte_work_count_first_5y"),
    ("topic_num_mto", "topic_num_mto"),
    ("mto_citation_impact", "mto_citation_impact"),
    ("is_elite", "is_elite"),
    ("outperforming", "outperforming"),
    ("degenerate_median", "degenerate_median"),
)

_TYPE_COLS = {
    TopicType.PRIMARY: "impact_primary",
    TopicType.SECONDARY: "impact_secondary",
    TopicType.NEW: "impact_new",
}


def profile_table(profiles: Sequence[PairProfile]) -> tuple[list[str], list[list[object]]]:
    header = [name for name, _ in _PROFILE_COLUMNS]
    header += ["impact_primary_mte", "impact_secondary_mte", "impact_new_mte"]
    header += ["impact_primary_mto", "impact_secondary_mto"]
    rows = []
    for p in profiles:
        row: list[object] = []
        for _, attr in _PROFILE_COLUMNS:
            value = getattr(p, attr)
            row.append(value.value if hasattr(value, "value") else value)
        row += [p.mentee_impact_by_type[t] for t in (TopicType.PRIMARY, TopicType.SECONDARY, TopicType.NEW)]
        row += [p.mentor_impact_by_type[t] for t in (TopicType.PRIMARY, TopicType.SECONDARY)]
        rows.append(row)
    return header, rows


def regression_table(profiles: Sequence[PairProfile], config: PipelineConfig) -> dict[str, list[float]]:
    """Column table for the model ladder, after cohort filters."""
    selected = [
        p
        for p in profiles
        if not config.regression_30y or (p.career_30y_mte and p.pre_1990_mte)
    ]
    cols = [
        "mentee_total_impact",
        "ave_distance",
        "ave_distance_sq",
        "career_len_mte",
        "mte_work_count_first_5y",
        "topic_num_mto",
        "mto_citation_impact",
        "colla_work_count",
        "colla_work_count_first_5y",
        "colla_work_count_later",
        "common_collaborators_count",
    ]
    return {c: [float(getattr(p, c)) for p in selected] for c in cols}


def cohort_outputs(
    profiles: Sequence[PairProfile], config: PipelineConfig, out_dir: Path
) -> list[str]:
    """Write every cohort-level CSV; returns the file names written."""
    written: list[str] = []

    def emit(name: str, header: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
        write_csv(out_dir / name, header, rows)
        written.append(name)

    header, rows = profile_table(profiles)
    emit("profiles.csv", header, rows)

    # Distributions.
    ccdf_rows: list[Sequence[object]] = []
    for name, values in (
        ("C_e_total", [p.mentee_total_impact for p in profiles]),
        ("C_r_total", [p.mentor_total_impact for p in profiles]),
    ):
        if values:
            xs, ps = ccdf(values)
            ccdf_rows += [(name, float(x), float(pr)) for x, pr in zip(xs, ps)]
    emit("ccdf.csv", ["distribution", "x", "p_greater"], ccdf_rows)

    # Strategy mix.
    strat_counts: dict[str, int] = {}
    for p in profiles:
        strat_counts[p.strategy.value] = strat_counts.get(p.strategy.value, 0) + 1
    total = len(profiles)
    emit(
        "strategy_fractions.csv",
        ["strategy", "count", "fraction"],
        [(s, c, c / total if total else math.nan) for s, c in sorted(strat_counts.items())],
    )

    # Topic count histogram.
    topic_hist: dict[int, int] = {}
    for p in profiles:
        topic_hist[p.n_topics] = topic_hist.get(p.n_topics, 0) + 1
    emit("topic_counts.csv", ["n_topics", "count"], sorted(topic_hist.items()))

    # Raw per-type impact values.
    emit(
        "impact_ratios.csv",
        [
            "mentor_id",
            "mentee_id",
            "C_e_primary",
            "C_e_secondary",
            "C_e_new",
            "C_r_primary",
            "C_r_secondary",
            "C_e_total",
            "C_r_total",
        ],
        [
            (
                p.mentor_id,
                p.mentee_id,
                p.mentee_impact_by_type[TopicType.PRIMARY],
                p.mentee_impact_by_type[TopicType.SECONDARY],
                p.mentee_impact_by_type[TopicType.NEW],
                p.mentor_impact_by_type[TopicType.PRIMARY],
                p.mentor_impact_by_type[TopicType.SECONDARY],
                p.mentee_total_impact,
                p.mentor_total_impact,
            )
            for p in profiles
        ],
    )

    # Normalized ternary shares; zero-impact pairs are skipped and counted.
    ternary_rows: list[Sequence[object]] = []
    n_zero = 0
    for p in profiles:
        try:
            sp, ss, sn = ternary_shares(p.mentee_impact_by_type)
        except ZeroImpact:
            n_zero += 1
            continue
        ternary_rows.append((p.mentor_id, p.mentee_id, sp, ss, sn))
    emit(
        "ternary.csv",
        ["mentor_id", "mentee_id", "share_primary", "share_secondary", "share_new"],
        ternary_rows,
    )

    # Quadrants of (mentee - mentor) primary/secondary impact deltas.
    deltas = [
        (
            p.mentee_impact_by_type[TopicType.PRIMARY] - p.mentor_impact_by_type[TopicType.PRIMARY],
            p.mentee_impact_by_type[TopicType.SECONDARY] - p.mentor_impact_by_type[TopicType.SECONDARY],
        )
        for p in profiles
    ]
    counts = quadrant_counts(deltas)
    emit(
        "quadrants.csv",
        ["quadrant", "count", "fraction"],
        [(q, counts[q], counts[q] / total if total else math.nan) for q in (1, 2, 3, 4)],
    )

    # Per-pair career series (long format) and cohort averages by group.
    emit(
        "pair_series.csv",
        ["mentor_id", "mentee_id", "role", "career_year", "yearly", "cumulative"],
        [
            (p.mentor_id, p.mentee_id, role, y, series.yearly[y], series.cumulative[y])
            for p in profiles
            for role, series in (("mentee", p.mentee_series), ("mentor", p.mentor_series))
            for y in range(len(series.yearly))
        ],
    )

    series_rows: list[Sequence[object]] = []
    for role in ("mentee", "mentor"):
        groups = {
            "all": profiles,
            "elite": [p for p in profiles if p.is_elite],
            "non_elite": [p for p in profiles if not p.is_elite],
        }
        for group in ("all", "elite", "non_elite"):
            members = groups[group]
            if not members:
                continue
            serieses = [
                p.mentee_series if role == "mentee" else p.mentor_series for p in members
            ]
            means, ns = cohort_average_series(serieses)
            series_rows += [
                (role, group, y, means[y], ns[y]) for y in range(len(means))
            ]
    emit(
        "career_series.csv",
        ["role", "group", "career_year", "mean_cumulative", "n_contributors"],
        series_rows,
    )

    # Cohort-mean decade composition by topic type.
    decade_acc: dict[tuple[str, int, str], list[float]] = {}
    for p in profiles:
        for role, ratios in (
            ("mentee", p.mentee_decade_ratios),
            ("mentor", p.mentor_decade_ratios),
        ):
            for decade, kinds in ratios.items():
                for kind, value in kinds.items():
                    decade_acc.setdefault((role, decade, kind.value), []).append(value)
    emit(
        "decade_ratios.csv",
        ["role", "decade", "topic_type", "mean_ratio", "n_pairs"],
        [
            (role, decade, kind, math.fsum(vals) / len(vals), len(vals))
            for (role, decade, kind), vals in sorted(decade_acc.items())
        ],
    )

    # Distance-impact curve and quadratic fit on the regression cohort.
    table = regression_table(profiles, config)
    xs = [
        x
        for x, y in zip(table["ave_distance"], table["mentee_total_impact"])
        if math.isfinite(x) and math.isfinite(y)
    ]
    ys = [
        y
        for x, y in zip(table["ave_distance"], table["mentee_total_impact"])
        if math.isfinite(x) and math.isfinite(y)
    ]
    try:
        curve = equal_count_bins(xs, ys, n_bins=config.n_bins)
        emit(
            "curve.csv",
            ["bin", "mean_x", "mean_y", "count"],
            [
                (i, curve.mean_x[i], curve.mean_y[i], curve.counts[i])
                for i in range(len(curve.mean_x))
            ],
        )
    except CociteError:
        emit("curve.csv", ["bin", "mean_x", "mean_y", "count"], [])
    try:
        fit = fit_quadratic(xs, ys)
        emit(
            "fit.csv",
            ["intercept", "slope", "curvature", "p_curvature", "peak_x", "inverted_u", "n"],
            [
                (
                    fit.intercept,
                    fit.slope,
                    fit.curvature,
                    fit.p_curvature,
                    fit.peak_x,
                    fit.inverted_u,
                    fit.n,
                )
            ],
        )
    except CociteError:
        emit(
            "fit.csv",
            ["intercept", "slope", "curvature", "p_curvature", "peak_x", "inverted_u", "n"],
            [],
        )

    # Model ladder.
    reg_rows: list[Sequence[object]] = []
    try:
        ladder = fit_model_ladder(
            table, outcome="mentee_total_impact", log1p_outcome=config.log1p_outcome
        )
        for model_name, res in ladder.models:
            for i, name in enumerate(res.names):
                reg_rows.append(
                    (
                        model_name,
                        name,
                        res.beta[i],
                        res.se[i],
                        res.t[i],
                        res.p[i],
                        res.r2,
                        res.adj_r2,
                        res.n,
                        res.df,
                    )
                )
    except CociteError:
        pass
    emit(
        "regression.csv",
        ["model", "term", "beta", "se", "t", "p", "r2", "adj_r2", "n", "df"],
        reg_rows,
    )

    return written


# ---------------------------------------------------------------------------
# full run


@dataclass
class RunResult:
    out_dir: Path
    n_profiles: int
    n_failures: int
    cache_hits: int
    cache_misses: int
    manifest_path: Path


def run_pipeline(config: PipelineConfig) -> RunResult:
    """Ingest, per-pair stage, cohort stage, report bundle, manifest."""
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    ingest_result = ingest_corpus(config.papers, config.mentorships, config.ingest_config())
    ingest_result.report.write_csv(out_dir / "ingest_report.csv")
    written = ["ingest_report.csv"]

    corpus_hash = corpus_digest(config.papers, config.mentorships)
    stage = build_profiles(
        ingest_result.index,
        ingest_result.mentorships,
        config,
        corpus_hash,
        cache_dir=out_dir / "cache",
    )
    assign_elites(stage.profiles, config)

    write_csv(
        out_dir / "failures.csv",
        ["mentor_id", "mentee_id", "stage", "reason"],
        stage.failures,
    )
    written.append("failures.csv")

    written += cohort_outputs(stage.profiles, config, out_dir)

    manifest = {
        "version": __version__,
        "config_hash": config.config_hash(),
        "corpus_hash": corpus_hash,
        "n_mentorships": len(ingest_result.mentorships),
        "n_profiles": len(stage.profiles),
        "n_failures": len(stage.failures),
        "files": {name: file_digest(out_dir / name) for name in sorted(written)},
    }
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )

    run_stats = {
        "cache_hits": stage.cache_hits,
        "cache_misses": stage.cache_misses,
        "workers": config.workers,
    }
    (out_dir / "run_stats.json").write_text(
        json.dumps(run_stats, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )

    return RunResult(
        out_dir=out_dir,
        n_profiles=len(stage.profiles),
        n_failures=len(stage.failures),
        cache_hits=stage.cache_hits,
        cache_misses=stage.cache_misses,
        manifest_path=manifest_path,
    )
