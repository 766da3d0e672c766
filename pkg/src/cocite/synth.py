"""Synthetic corpora with planted ground truth.

Generators here exist so every derived quantity in the package can be
checked against values known by construction: planted topic memberships,
planted strategies and new-topic ratios, per-topic impact computed
independently during generation, planted covariates, and a regression
cohort with known coefficients. All generators are deterministic functions
of their seed and write byte-stable JSONL.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .community import TopicAssignment
from .corpus import (
    CitationIndex,
    MentorshipRecord,
    PaperRecord,
    index_from_records,
)
from .pairgraph import MENTEE_SIDE, MENTOR_SIDE, Authorship, PairGraph
from .topics import Strategy

# ---------------------------------------------------------------------------
# direct graph construction (no corpus round-trip)


def graph_from_edges(
    labels: Mapping[str, Authorship],
    edges: Iterable[tuple[str, str]],
    mentor_id: str = "R",
    mentee_id: str = "E",
) -> PairGraph:
    """Assemble a PairGraph straight from labels and an edge list.

    Co-citing sources get a placeholder entry per edge; builders that care
    about sources go through a real corpus instead.
    """
    nodes = tuple(sorted(labels))
    adj: dict[str, set[str]] = {n: set() for n in nodes}
    sources: dict[tuple[str, str], tuple[str, ...]] = {}
    for u, v in edges:
        if u == v:
            continue
        a, b = (u, v) if u < v else (v, u)
        adj[a].add(b)
        adj[b].add(a)
        sources[(a, b)] = ("src",)
    return PairGraph(
        mentor_id=mentor_id,
        mentee_id=mentee_id,
        nodes=nodes,
        labels=dict(labels),
        adjacency={n: tuple(sorted(s)) for n, s in adj.items()},
        cociting_sources=dict(sorted(sources.items())),
    )


def planted_partition_pair_graph(
    seed: int,
    n_blocks: int = 4,
    block_size: int = 15,
    p_in: float = 0.9,
    p_out: float = 0.02,
) -> tuple[PairGraph, dict[str, int]]:
    """Random graph with planted dense blocks and sparse cross links."""
    rng = random.Random(seed)
    labels: dict[str, Authorship] = {}
    block_of: dict[str, int] = {}
    for b in range(n_blocks):
        for k in range(block_size):
            node = f"b{b}n{k:02d}"
            labels[node] = Authorship.MENTEE if (b * block_size + k) % 2 == 0 else Authorship.MENTOR
            block_of[node] = b
    nodes = sorted(labels)
    edges = []
    for i, u in enumerate(nodes):
        for v in nodes[i + 1:]:
            p = p_in if block_of[u] == block_of[v] else p_out
            if rng.random() < p:
                edges.append((u, v))
    return graph_from_edges(labels, edges), block_of


def random_pair_graph(seed: int, max_nodes: int = 50) -> PairGraph:
    """Random sparse pair graph; both sides guaranteed non-empty."""
    rng = random.Random(seed)
    n = rng.randint(1, max_nodes)
    nodes = [f"n{k:02d}" for k in range(n)]
    labels = {
        node: rng.choice((Authorship.MENTEE, Authorship.MENTOR, Authorship.JOINT))
        for node in nodes
    }
    if not any(lab in MENTEE_SIDE for lab in labels.values()) or not any(
        lab in MENTOR_SIDE for lab in labels.values()
    ):
        labels[nodes[0]] = Authorship.JOINT
    p = rng.uniform(0.02, 0.3)
    edges = []
    for i, u in enumerate(nodes):
        for v in nodes[i + 1:]:
            if rng.random() < p:
                edges.append((u, v))
    return graph_from_edges(labels, edges)


# ---------------------------------------------------------------------------
# random pair corpora for oracle comparisons


def random_pair_corpus(
    seed: int,
    max_papers: int = 30,
    max_citers: int = 200,
) -> tuple[CitationIndex, str, str, TopicAssignment]:
    """Small random corpus around one pair, plus an arbitrary topic split.

    Pair papers may cite each other (so pair papers can co-cite), citers
    cite 1 to 5 pair papers, topics are a random partition with a few
    papers possibly left unassigned. Returns (index, mentor_id, mentee_id,
    assignment).
    """
    rng = random.Random(seed)
    mentor_id, mentee_id = "R", "E"
    pool = [f"co{k}" for k in range(5)]
    n = rng.randint(4, max_papers)
    kinds = [rng.choice(("mte", "mto", "joint")) for _ in range(n)]
    if not any(k in ("mte", "joint") for k in kinds):
        kinds[0] = "mte"
    if not any(k in ("mto", "joint") for k in kinds):
        kinds[-1] = "mto"

    pair_ids = [f"w{k:03d}" for k in range(n)]
    records: list[PaperRecord] = []
    for pid, kind in zip(pair_ids, kinds):
        if kind == "mte":
            authors = [mentee_id]
        elif kind == "mto":
            authors = [mentor_id]
        else:
            authors = [mentee_id, mentor_id]
        authors += rng.sample(pool, rng.randint(0, 2))
        others = [q for q in pair_ids if q != pid]
        refs = rng.sample(others, rng.randint(0, min(3, len(others))))
        records.append(
            PaperRecord(pid, tuple(authors), rng.randint(1970, 2015), "f", tuple(refs))
        )
    n_citers = rng.randint(0, max_citers)
    for c in range(n_citers):
        refs = rng.sample(pair_ids, rng.randint(1, min(5, n)))
        records.append(
            PaperRecord(
                f"c{c:04d}",
                (f"ca{c:04d}",),
                rng.randint(1971, 2021),
                "f",
                tuple(refs),
            )
        )
    index = index_from_records(records)

    n_topics = rng.randint(1, 4)
    topic_of: dict[str, int | None] = {}
    members: dict[int, list[str]] = {}
    for pid in pair_ids:
        if rng.random() < 0.1:
            topic_of[pid] = None
            continue
        t = rng.randrange(n_topics)
        topic_of[pid] = t
        members.setdefault(t, []).append(pid)
    # Dense ids ordered by descending size then smallest member id.
    ordered = sorted(
        (sorted(ms) for ms in members.values()), key=lambda ms: (-len(ms), ms[0])
    )
    dense_of: dict[str, int | None] = {pid: None for pid in pair_ids}
    topics: dict[int, tuple[str, ...]] = {}
    for i, ms in enumerate(ordered):
        topics[i] = tuple(ms)
        for pid in ms:
            dense_of[pid] = i
    assignment = TopicAssignment(topic_of=dense_of, topics=topics, modularity_q=0.0)
    return index, mentor_id, mentee_id, assignment


@dataclass(frozen=True)
class OracleTopicImpact:
    pool: frozenset[str]
    w: dict[str, int]
    c_mentee: float
    c_mentor: float
    c_mentee_exact: Fraction
    c_mentor_exact: Fraction


@dataclass(frozen=True)
class OracleImpact:
    topics: dict[int, OracleTopicImpact]
    mentee_total: float
    mentor_total: float


def oracle_impact(
    index: CitationIndex,
    labels: Mapping[str, Authorship],
    topics: Mapping[int, Sequence[str]],
) -> OracleImpact:
    """Impact allocation recomputed by exhaustive forward scans.

    Pools come from scanning every corpus paper's reference list against
    each topic's member set; per-paper scores recount citations the same
    way. Totals are kept both as exact rationals and as fsum of the float
    shares.
    """
    out: dict[int, OracleTopicImpact] = {}
    mentee_shares: list[float] = []
    mentor_shares: list[float] = []
    for topic_id in sorted(topics):
        member_set = set(topics[topic_id])
        pool = set()
        for q, refs in index.citing_map.items():
            if len(member_set.intersection(refs)) >= 2:
                pool.add(q)
        w: dict[str, int] = {}
        for p in member_set:
            w[p] = sum(1 for q in pool if p in index.citing_map[q])
        c_e: list[float] = []
        c_r: list[float] = []
        c_e_exact = Fraction(0)
        c_r_exact = Fraction(0)
        for p in sorted(member_set):
            s = index.meta(p).author_count
            share = w[p] / s
            exact = Fraction(w[p], s)
            if labels[p] in MENTEE_SIDE:
                c_e.append(share)
                c_e_exact += exact
            if labels[p] in MENTOR_SIDE:
                c_r.append(share)
                c_r_exact += exact
        mentee_shares.extend(c_e)
        mentor_shares.extend(c_r)
        out[topic_id] = OracleTopicImpact(
            pool=frozenset(pool),
            w=w,
            c_mentee=math.fsum(c_e),
            c_mentor=math.fsum(c_r),
            c_mentee_exact=c_e_exact,
            c_mentor_exact=c_r_exact,
        )
    return OracleImpact(
        topics=out,
        mentee_total=math.fsum(mentee_shares),
        mentor_total=math.fsum(mentor_shares),
    )


# ---------------------------------------------------------------------------
# full synthetic corpora with planted pairs


@dataclass
class SynthConfig:
    n_pairs: int = 8
    seed: int = 0
    p_in: float = 0.9
    p_out: float = 0.02
    fields: tuple[str, ...] = ("fieldA", "fieldB")


@dataclass
class PairTruth:
    """Everything planted for one pair, known by construction."""

    mentor_id: str
    mentee_id: str
    field: str
    strategy: Strategy
    n_shared: int
    n_new: int
    new_topic_ratio: float
    n_topics: int
    topic_of: dict[str, int]
    mentor_primary_topics: tuple[int, ...]
    per_topic_mentee_impact: dict[int, float]
    per_topic_mentor_impact: dict[int, float]
    mentee_total: float
    mentor_total: float
    colla_work_count: int
    common_collaborators_count: int
    mentee_first_year: int
    mentee_career_len: int
    mentor_first_year: int
    mentor_career_len: int

    def to_dict(self) -> dict:
        return {
            "mentor_id": self.mentor_id,
            "mentee_id": self.mentee_id,
            "field": self.field,
            "strategy": self.strategy.value,
            "n_shared": self.n_shared,
            "n_new": self.n_new,
            "new_topic_ratio": self.new_topic_ratio,
            "n_topics": self.n_topics,
            "topic_of": self.topic_of,
            "mentor_primary_topics": list(self.mentor_primary_topics),
            "per_topic_mentee_impact": {str(k): v for k, v in self.per_topic_mentee_impact.items()},
            "per_topic_mentor_impact": {str(k): v for k, v in self.per_topic_mentor_impact.items()},
            "mentee_total": self.mentee_total,
            "mentor_total": self.mentor_total,
            "colla_work_count": self.colla_work_count,
            "common_collaborators_count": self.common_collaborators_count,
            "mentee_first_year": self.mentee_first_year,
            "mentee_career_len": self.mentee_career_len,
            "mentor_first_year": self.mentor_first_year,
            "mentor_career_len": self.mentor_career_len,
        }


@dataclass
class SynthCorpus:
    papers: list[PaperRecord]
    mentorships: list[MentorshipRecord]
    truths: dict[tuple[str, str], PairTruth]

    def index(self) -> CitationIndex:
        return index_from_records(self.papers)


_STRATEGY_CYCLE = (Strategy.PURE_FOLLOW, Strategy.FOLLOW_AND_INNOVATE, Strategy.PURE_INNOVATE)


def _plant_pair(
    rng: random.Random, pair_no: int, cfg: SynthConfig
) -> tuple[list[PaperRecord], MentorshipRecord, PairTruth]:
    mentor_id = f"mto{pair_no:04d}"
    mentee_id = f"mte{pair_no:04d}"
    field = cfg.fields[pair_no % len(cfg.fields)]
    strategy = _STRATEGY_CYCLE[pair_no % len(_STRATEGY_CYCLE)]

    n_mentor_topics = rng.randint(3, 4)
    if strategy is Strategy.PURE_FOLLOW:
        k_shared = rng.randint(3, n_mentor_topics)
        n_new = 0
    elif strategy is Strategy.FOLLOW_AND_INNOVATE:
        k_shared = rng.randint(2, n_mentor_topics)
        n_new = rng.randint(1, 3)
    else:
        k_shared = 0
        n_new = rng.randint(2, 3)
    n_mentor_only = n_mentor_topics - k_shared
    n_topics = k_shared + n_new + n_mentor_only

    # Careers: mentee starts 1972-1985 so 30+ year spans stay inside 2021.
    mentee_first = rng.randint(1972, 1985)
    mentee_last = mentee_first + rng.randint(30, 36)
    mentor_first = max(1960, mentee_first - rng.randint(3, 12))
    mentor_last = min(mentor_first + rng.randint(30, 40), 2021)

    # Topic layout: ids 0..k_shared-1 shared, then new, then mentor-only.
    specs: list[tuple[str, int]] = []
    for t in range(k_shared):
        specs += [("mte", t)] * rng.randint(7, 10)
        specs += [("mto", t)] * rng.randint(7, 10)
    for t in range(k_shared, k_shared + n_new):
        specs += [("mte", t)] * rng.randint(12, 16)
    for t in range(k_shared + n_new, n_topics):
        specs += [("mto", t)] * rng.randint(12, 16)
    n_joint = rng.randint(0, 3) if k_shared > 0 else 0
    specs += [("joint", rng.randrange(k_shared)) for _ in range(n_joint)]

    # Years: pin the first two papers of each solo role to the career ends
    # so realized first year and span equal the planted ones.
    years: list[int] = []
    mte_seen = 0
    mto_seen = 0
    for kind, _ in specs:
        if kind == "mte":
            if mte_seen == 0:
                years.append(mentee_first)
            elif mte_seen == 1:
                years.append(mentee_last)
            else:
                years.append(rng.randint(mentee_first, mentee_last))
            mte_seen += 1
        elif kind == "mto":
            if mto_seen == 0:
                years.append(mentor_first)
            elif mto_seen == 1:
                years.append(mentor_last)
            else:
                years.append(rng.randint(mentor_first, mentor_last))
            mto_seen += 1
        else:
            years.append(rng.randint(mentee_first, min(mentee_last, mentor_last)))

    pool = [f"p{pair_no:03d}co{m}" for m in range(6)]
    records: list[PaperRecord] = []
    paper_ids: list[str] = []
    side_coauthors = {"mte": set(), "mto": set()}
    for j, ((kind, _topic), year) in enumerate(zip(specs, years)):
        pid = f"p{pair_no:03d}w{j:04d}"
        paper_ids.append(pid)
        extras = rng.sample(pool, rng.randint(0, 2))
        if kind == "mte":
            authors = (mentee_id, *extras)
            side_coauthors["mte"].update(extras)
        elif kind == "mto":
            authors = (mentor_id, *extras)
            side_coauthors["mto"].update(extras)
        else:
            authors = (mentee_id, mentor_id, *extras)
            side_coauthors["mte"].update(extras)
            side_coauthors["mto"].update(extras)
        records.append(PaperRecord(pid, authors, year, field, ()))

    members: dict[int, list[int]] = {}
    for j, (_, topic) in enumerate(specs):
        members.setdefault(topic, []).append(j)

    # Co-citing sources: one fresh citer per sampled paper pair. Same-topic
    # citers land in that topic's pool (they cite two members); cross-topic
    # citers only add stray edges.
    w = [0] * len(specs)
    citer_no = 0
    year_of = years

    def add_citer(u: int, v: int) -> None:
        nonlocal citer_no
        cid = f"p{pair_no:03d}c{citer_no:05d}"
        author = f"p{pair_no:03d}ca{citer_no:05d}"
        citer_no += 1
        year = min(2021, max(year_of[u], year_of[v]) + rng.randint(0, 3))
        records.append(
            PaperRecord(cid, (author,), year, field, (paper_ids[u], paper_ids[v]))
        )

    for topic in range(n_topics):
        ms = members[topic]
        for a in range(len(ms)):
            for b in range(a + 1, len(ms)):
                if rng.random() < cfg.p_in:
                    u, v = ms[a], ms[b]
                    add_citer(u, v)
                    w[u] += 1
                    w[v] += 1
    for t1 in range(n_topics):
        for t2 in range(t1 + 1, n_topics):
            for u in members[t1]:
                for v in members[t2]:
                    if rng.random() < cfg.p_out:
                        add_citer(u, v)

    # Planted impact from the tracked in-topic citation counts.
    per_topic_e: dict[int, float] = {}
    per_topic_r: dict[int, float] = {}
    flat_e: list[float] = []
    flat_r: list[float] = []
    for topic in range(n_topics):
        e_shares = []
        r_shares = []
        for j in members[topic]:
            share = w[j] / len(records[j].author_ids)
            if specs[j][0] in ("mte", "joint"):
                e_shares.append(share)
            if specs[j][0] in ("mto", "joint"):
                r_shares.append(share)
        per_topic_e[topic] = math.fsum(e_shares)
        per_topic_r[topic] = math.fsum(r_shares)
        flat_e.extend(e_shares)
        flat_r.extend(r_shares)

    # Planted mentor-side typing by the median-share rule.
    mentor_counts = {
        t: sum(1 for j in members[t] if specs[j][0] in ("mto", "joint"))
        for t in range(n_topics)
    }
    mentor_topics = [t for t, c in mentor_counts.items() if c > 0]
    total_mentor = sum(mentor_counts[t] for t in mentor_topics)
    props = sorted(mentor_counts[t] / total_mentor for t in mentor_topics)
    mid = len(props) // 2
    median = props[mid] if len(props) % 2 == 1 else (props[mid - 1] + props[mid]) / 2
    primary = tuple(
        t for t in sorted(mentor_topics) if mentor_counts[t] / total_mentor > median
    )

    common = side_coauthors["mte"] & side_coauthors["mto"]
    truth = PairTruth(
        mentor_id=mentor_id,
        mentee_id=mentee_id,
        field=field,
        strategy=strategy,
        n_shared=k_shared,
        n_new=n_new,
        new_topic_ratio=n_new / (n_new + k_shared),
        n_topics=n_topics,
        topic_of={paper_ids[j]: specs[j][1] for j in range(len(specs))},
        mentor_primary_topics=primary,
        per_topic_mentee_impact=per_topic_e,
        per_topic_mentor_impact=per_topic_r,
        mentee_total=math.fsum(flat_e),
        mentor_total=math.fsum(flat_r),
        colla_work_count=n_joint,
        common_collaborators_count=len(common),
        mentee_first_year=mentee_first,
        mentee_career_len=mentee_last - mentee_first,
        mentor_first_year=mentor_first,
        mentor_career_len=mentor_last - mentor_first,
    )
    mentorship = MentorshipRecord(mentor_id, mentee_id, mentee_first, field)
    return records, mentorship, truth


def synthesize_corpus(config: SynthConfig | None = None) -> SynthCorpus:
    cfg = config or SynthConfig()
    rng = random.Random(cfg.seed)
    papers: list[PaperRecord] = []
    mentorships: list[MentorshipRecord] = []
    truths: dict[tuple[str, str], PairTruth] = {}
    for i in range(cfg.n_pairs):
        records, mentorship, truth = _plant_pair(rng, i, cfg)
        papers.extend(records)
        mentorships.append(mentorship)
        truths[(truth.mentor_id, truth.mentee_id)] = truth
    return SynthCorpus(papers=papers, mentorships=mentorships, truths=truths)


def write_corpus(corpus: SynthCorpus, out_dir: str | Path) -> tuple[Path, Path, Path]:
    """Write papers.jsonl, mentorships.jsonl, and ground_truth.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    papers_path = out / "papers.jsonl"
    mentorships_path = out / "mentorships.jsonl"
    truth_path = out / "ground_truth.json"
    with open(papers_path, "w", encoding="utf-8") as fh:
        for rec in corpus.papers:
            fh.write(
                json.dumps(
                    {
                        "paper_id": rec.paper_id,
                        "author_ids": list(rec.author_ids),
                        "pub_year": rec.pub_year,
                        "field": rec.field,
                        "reference_ids": list(rec.reference_ids),
                    },
                    sort_keys=True,
                )
                + "\n"
            )
    with open(mentorships_path, "w", encoding="utf-8") as fh:
        for m in corpus.mentorships:
            fh.write(
                json.dumps(
                    {
                        "mentor_id": m.mentor_id,
                        "mentee_id": m.mentee_id,
                        "start_year": m.start_year,
                        "field": m.field,
                    },
                    sort_keys=True,
                )
                + "\n"
            )
    truth_path.write_text(
        json.dumps(
            {"pairs": [t.to_dict() for t in corpus.truths.values()]},
            sort_keys=True,
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    return papers_path, mentorships_path, truth_path


# ---------------------------------------------------------------------------
# planted regression cohort


def planted_regression_cohort(
    seed: int, n: int = 2000
) -> tuple[dict[str, np.ndarray], dict[str, float]]:
    """Covariate table with a known quadratic outcome model.

    outcome = 1 + 4 d - d^2 + 0.5 career_len + noise, with noise variance
    set to half the signal variance. The quadratic peak sits at d = 2. All
    other covariates carry true zero coefficients.
    """
    rng = np.random.default_rng(seed)
    d = rng.uniform(0.5, 3.5, n)
    career = rng.integers(30, 41, n).astype(float)
    mte5 = rng.integers(1, 16, n).astype(float)
    tnum = rng.integers(2, 6, n).astype(float)
    mcit = rng.integers(50, 501, n).astype(float)
    c5 = rng.integers(0, 11, n).astype(float)
    cl = rng.integers(0, 16, n).astype(float)
    cc = rng.integers(0, 21, n).astype(float)
    signal = 1.0 + 4.0 * d - d * d + 0.5 * career
    sigma = float(np.sqrt(signal.var() / 2.0))
    y = signal + rng.normal(0.0, sigma, n)
    table = {
        "ave_distance": d,
        "ave_distance_sq": d * d,
        "career_len_mte": career,
        "mte_work_count_first_5y": mte5,
        "topic_num_mto": tnum,
        "mto_citation_impact": mcit,
        "colla_work_count": c5 + cl,
        "colla_work_count_first_5y": c5,
        "colla_work_count_later": cl,
        "common_collaborators_count": cc,
        "mentee_total_impact": y,
    }
    truth = {
        "intercept": 1.0,
        "ave_distance": 4.0,
        "ave_distance_sq": -1.0,
        "career_len_mte": 0.5,
        "mte_work_count_first_5y": 0.0,
        "topic_num_mto": 0.0,
        "mto_citation_impact": 0.0,
        "colla_work_count": 0.0,
        "colla_work_count_first_5y": 0.0,
        "colla_work_count_later": 0.0,
        "common_collaborators_count": 0.0,
        "peak": 2.0,
        "sigma": sigma,
    }
    return table, truth
