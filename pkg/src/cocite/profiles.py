"""Per-pair profile assembly.

One profile runs the whole per-pair chain (graph, topics, typing, strategy,
impact, distance, careers, covariates) and carries every scalar the
cohort-level stages need. Elite and outperforming flags stay unset here;
they need cohort-wide thresholds and are filled in by the pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .career import (
    CareerSeries,
    build_career_series,
    decade_type_ratios,
    typed_contributions,
)
from .community import DetectionConfig, detect_topics
from .corpus import CitationIndex, MentorshipRecord, cohort_flags
from .distance import average_distance
from .errors import NoFinitePaths
from .impact import allocate_impact
from .pairgraph import Authorship, build_pair_graph
from .topics import (
    Strategy,
    TopicType,
    author_citation_total,
    classify_strategy,
    classify_topics,
)

MENTEE_TYPES = (TopicType.PRIMARY, TopicType.SECONDARY, TopicType.NEW)
MENTOR_TYPES = (TopicType.PRIMARY, TopicType.SECONDARY)


@dataclass
class PairParams:
    """Knobs for the per-pair computation; part of the cache key."""

    gamma: float = 1.0
    seed: int = 0
    min_community_size: int = 10
    exclude_self_cocitation: bool = False
    include_joint_self_pairs: bool = True
    citation_window: int = 5

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "seed": self.seed,
            "min_community_size": self.min_community_size,
            "exclude_self_cocitation": self.exclude_self_cocitation,
            "include_joint_self_pairs": self.include_joint_self_pairs,
            "citation_window": self.citation_window,
        }


@dataclass
class PairProfile:
    mentor_id: str
    mentee_id: str
    field: str

    n_nodes: int
    n_edges: int
    n_topics: int
    n_unassigned: int
    modularity_q: float
    degenerate_median: bool

    strategy: Strategy
    n_shared: int
    n_new: int
    new_topic_ratio: float

    ave_distance: float
    n_distance_pairs: int
    n_disconnected: int
    distance_substituted: bool
    distance_failed: bool

    mentee_total_impact: float
    mentor_total_impact: float
    mentee_impact_by_type: dict[TopicType, float]
    mentor_impact_by_type: dict[TopicType, float]
    zero_impact: bool

    mentee_citation_total: int
    mentor_citation_total: int

    first_pub_year_mte: int
    first_pub_year_mto: int
    career_len_mte: int
    career_len_mto: int
    pre_1990_mte: bool
    career_30y_mte: bool

    colla_work_count: int
    colla_work_count_first_5y: int
    colla_work_count_later: int
    common_collaborators_count: int
    mte_work_count_first_5y: int
    topic_num_mto: int
    mto_citation_impact: int

    mentee_series: CareerSeries
    mentor_series: CareerSeries
    mentee_decade_ratios: dict[int, dict[TopicType, float]]
    mentor_decade_ratios: dict[int, dict[TopicType, float]]

    is_elite: bool | None = None
    outperforming: bool | None = None

    @property
    def ave_distance_sq(self) -> float:
        return self.ave_distance * self.ave_distance

    def to_dict(self) -> dict:
        d = {
            "mentor_id": self.mentor_id,
            "mentee_id": self.mentee_id,
            "field": self.field,
            "n_nodes": self.n_nodes,
            "n_edges": self.n_edges,
            "n_topics": self.n_topics,
            "n_unassigned": self.n_unassigned,
            "modularity_q": self.modularity_q,
            "degenerate_median": self.degenerate_median,
            "strategy": self.strategy.value,
            "n_shared": self.n_shared,
            "n_new": self.n_new,
            "new_topic_ratio": self.new_topic_ratio,
            "ave_distance": self.ave_distance,
            "n_distance_pairs": self.n_distance_pairs,
            "n_disconnected": self.n_disconnected,
            "distance_substituted": self.distance_substituted,
            "distance_failed": self.distance_failed,
            "mentee_total_impact": self.mentee_total_impact,
            "mentor_total_impact": self.mentor_total_impact,
            "mentee_impact_by_type": {k.value: v for k, v in self.mentee_impact_by_type.items()},
            "mentor_impact_by_type": {k.value: v for k, v in self.mentor_impact_by_type.items()},
            "zero_impact": self.zero_impact,
            "mentee_citation_total": self.mentee_citation_total,
            "mentor_citation_total": self.mentor_citation_total,
            "first_pub_year_mte": self.first_pub_year_mte,
            "first_pub_year_mto": self.first_pub_year_mto,
            "career_len_mte": self.career_len_mte,
            "career_len_mto": self.career_len_mto,
            "pre_1990_mte": self.pre_1990_mte,
            "career_30y_mte": self.career_30y_mte,
            "colla_work_count": self.colla_work_count,
            "colla_work_count_first_5y": self.colla_work_count_first_5y,
            "colla_work_count_later": self.colla_work_count_later,
            "common_collaborators_count": self.common_collaborators_count,
            "mte_work_count_first_5y": self.mte_work_count_first_5y,
            "topic_num_mto": self.topic_num_mto,
            "mto_citation_impact": self.mto_citation_impact,
            "mentee_series": [list(self.mentee_series.yearly), list(self.mentee_series.cumulative)],
            "mentor_series": [list(self.mentor_series.yearly), list(self.mentor_series.cumulative)],
            "mentee_decade_ratios": {
                str(dec): {k.value: v for k, v in kinds.items()}
                for dec, kinds in self.mentee_decade_ratios.items()
            },
            "mentor_decade_ratios": {
                str(dec): {k.value: v for k, v in kinds.items()}
                for dec, kinds in self.mentor_decade_ratios.items()
            },
            "is_elite": self.is_elite,
            "outperforming": self.outperforming,
        }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PairProfile":
        return cls(
            mentor_id=d["mentor_id"],
            mentee_id=d["mentee_id"],
            field=d["field"],
            n_nodes=d["n_nodes"],
            n_edges=d["n_edges"],
            n_topics=d["n_topics"],
            n_unassigned=d["n_unassigned"],
            modularity_q=d["modularity_q"],
            degenerate_median=d["degenerate_median"],
            strategy=Strategy(d["strategy"]),
            n_shared=d["n_shared"],
            n_new=d["n_new"],
            new_topic_ratio=d["new_topic_ratio"],
            ave_distance=d["ave_distance"],
            n_distance_pairs=d["n_distance_pairs"],
            n_disconnected=d["n_disconnected"],
            distance_substituted=d["distance_substituted"],
            distance_failed=d["distance_failed"],
            mentee_total_impact=d["mentee_total_impact"],
            mentor_total_impact=d["mentor_total_impact"],
            mentee_impact_by_type={TopicType(k): v for k, v in d["mentee_impact_by_type"].items()},
            mentor_impact_by_type={TopicType(k): v for k, v in d["mentor_impact_by_type"].items()},
            zero_impact=d["zero_impact"],
            mentee_citation_total=d["mentee_citation_total"],
            mentor_citation_total=d["mentor_citation_total"],
            first_pub_year_mte=d["first_pub_year_mte"],
            first_pub_year_mto=d["first_pub_year_mto"],
            career_len_mte=d["career_len_mte"],
            career_len_mto=d["career_len_mto"],
            pre_1990_mte=d["pre_1990_mte"],
            career_30y_mte=d["career_30y_mte"],
            colla_work_count=d["colla_work_count"],
            colla_work_count_first_5y=d["colla_work_count_first_5y"],
            colla_work_count_later=d["colla_work_count_later"],
            common_collaborators_count=d["common_collaborators_count"],
            mte_work_count_first_5y=d["mte_work_count_first_5y"],
            topic_num_mto=d["topic_num_mto"],
            mto_citation_impact=d["mto_citation_impact"],
            mentee_series=CareerSeries(
                yearly=tuple(d["mentee_series"][0]),
                cumulative=tuple(d["mentee_series"][1]),
            ),
            mentor_series=CareerSeries(
                yearly=tuple(d["mentor_series"][0]),
                cumulative=tuple(d["mentor_series"][1]),
            ),
            mentee_decade_ratios={
                int(dec): {TopicType(k): v for k, v in kinds.items()}
                for dec, kinds in d["mentee_decade_ratios"].items()
            },
            mentor_decade_ratios={
                int(dec): {TopicType(k): v for k, v in kinds.items()}
                for dec, kinds in d["mentor_decade_ratios"].items()
            },
            is_elite=d["is_elite"],
            outperforming=d["outperforming"],
        )


def _collaborators(author_id: str, index: CitationIndex) -> set[str]:
    out: set[str] = set()
    for p in index.papers_of(author_id):
        out.update(index.authors_of(p))
    out.discard(author_id)
    return out


def build_pair_profile(
    mentorship: MentorshipRecord,
    index: CitationIndex,
    params: PairParams | None = None,
) -> PairProfile:
    """Run the full per-pair chain and assemble the profile.

    A disconnected distance computation with nothing to substitute leaves
    ave_distance as NaN and flags the failure; structural problems (no
    retained topics, mentee without topics, an author without papers)
    propagate to the caller for fault isolation.
    """
    p = params or PairParams()
    mentor_id, mentee_id = mentorship.mentor_id, mentorship.mentee_id

    graph = build_pair_graph(
        mentor_id, mentee_id, index, exclude_self_cocitation=p.exclude_self_cocitation
    )
    assignment = detect_topics(
        graph,
        DetectionConfig(gamma=p.gamma, seed=p.seed, min_community_size=p.min_community_size),
    )
    typing = classify_topics(graph, assignment)
    strat = classify_strategy(typing)
    allocation = allocate_impact(graph, assignment, index)

    try:
        dist = average_distance(graph, include_joint_self_pairs=p.include_joint_self_pairs)
        ave_distance = dist.ave_distance
        n_distance_pairs = dist.n_pairs
        n_disconnected = dist.n_disconnected
        substituted = dist.substituted
        distance_failed = False
    except NoFinitePaths:
        ave_distance = math.nan
        n_distance_pairs = 0
        n_disconnected = 0
        substituted = False
        distance_failed = True

    mentee_rows = typed_contributions(allocation, typing, index, "mentee")
    mentor_rows = typed_contributions(allocation, typing, index, "mentor")
    mentee_by_type = {
        t: math.fsum(share for _, share, k in mentee_rows if k is t) for t in MENTEE_TYPES
    }
    mentor_by_type = {
        t: math.fsum(share for _, share, k in mentor_rows if k is t) for t in MENTOR_TYPES
    }

    flags_mte = cohort_flags(mentee_id, index, min_papers=0)
    flags_mto = cohort_flags(mentor_id, index, min_papers=0)
    mentee_series = build_career_series(
        [(y, s) for y, s, _ in mentee_rows], flags_mte.career_len
    )
    mentor_series = build_career_series(
        [(y, s) for y, s, _ in mentor_rows], flags_mto.career_len
    )

    joint_papers = [n for n, lab in graph.labels.items() if lab is Authorship.JOINT]
    first_mte = flags_mte.first_pub_year
    joint_first = sum(
        1 for j in joint_papers if index.paper_meta[j].pub_year - first_mte <= 5
    )
    mte_first = sum(
        1
        for q in index.papers_of(mentee_id)
        if index.paper_meta[q].pub_year - first_mte <= 5
    )
    common = _collaborators(mentee_id, index) & _collaborators(mentor_id, index)
    common -= {mentor_id, mentee_id}

    mto_citations = author_citation_total(mentor_id, index, window=p.citation_window)
    mte_citations = author_citation_total(mentee_id, index, window=p.citation_window)

    return PairProfile(
        mentor_id=mentor_id,
        mentee_id=mentee_id,
        field=mentorship.field,
        n_nodes=graph.n_nodes,
        n_edges=graph.n_edges,
        n_topics=assignment.n_topics,
        n_unassigned=assignment.n_unassigned,
        modularity_q=assignment.modularity_q,
        degenerate_median=typing.degenerate_median,
        strategy=strat.strategy,
        n_shared=strat.n_shared,
        n_new=strat.n_new,
        new_topic_ratio=strat.new_topic_ratio,
        ave_distance=ave_distance,
        n_distance_pairs=n_distance_pairs,
        n_disconnected=n_disconnected,
        distance_substituted=substituted,
        distance_failed=distance_failed,
        mentee_total_impact=allocation.mentee_total,
        mentor_total_impact=allocation.mentor_total,
        mentee_impact_by_type=mentee_by_type,
        mentor_impact_by_type=mentor_by_type,
        zero_impact=allocation.mentee_total == 0.0,
        mentee_citation_total=mte_citations,
        mentor_citation_total=mto_citations,
        first_pub_year_mte=flags_mte.first_pub_year,
        first_pub_year_mto=flags_mto.first_pub_year,
        career_len_mte=flags_mte.career_len,
        career_len_mto=flags_mto.career_len,
        pre_1990_mte=flags_mte.pre_1990_starter,
        career_30y_mte=flags_mte.career_30y,
        colla_work_count=len(joint_papers),
        colla_work_count_first_5y=joint_first,
        colla_work_count_later=len(joint_papers) - joint_first,
        common_collaborators_count=len(common),
        mte_work_count_first_5y=mte_first,
        topic_num_mto=len(typing.mentor_side),
        mto_citation_impact=mto_citations,
        mentee_series=mentee_series,
        mentor_series=mentor_series,
        mentee_decade_ratios=decade_type_ratios(mentee_rows),
        mentor_decade_ratios=decade_type_ratios(mentor_rows),
    )
