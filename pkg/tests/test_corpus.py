"""Ingestion, validation, and citation index behavior."""

import json

import pytest
from hypothesis import given, settings, strategies as st

from cocite.corpus import (
    CohortFlags,
    IngestConfig,
    cohort_flags,
    five_year_citations,
    index_from_records,
    ingest_corpus,
)
from cocite.errors import (
    DuplicatePaperId,
    EmptyCorpus,
    MalformedRecord,
    UnknownAuthor,
    UnknownPaper,
)

from helpers import make_index, paper


def write_corpus(tmp_path, papers, mentorships):
    ppath = tmp_path / "papers.jsonl"
    mpath = tmp_path / "mentorships.jsonl"
    ppath.write_text("\n".join(json.dumps(r) for r in papers) + "\n")
    mpath.write_text("\n".join(json.dumps(r) for r in mentorships) + "\n")
    return ppath, mpath


def paper_obj(pid, authors, year=2000, field="f", refs=()):
    return {
        "paper_id": pid,
        "author_ids": list(authors),
        "pub_year": year,
        "field": field,
        "reference_ids": list(refs),
    }


def mship_obj(mentor, mentee, start_year=1990, field="f"):
    return {
        "mentor_id": mentor,
        "mentee_id": mentee,
        "start_year": start_year,
        "field": field,
    }


BASE_CFG = IngestConfig(min_papers=1)


class TestIngest:
    def test_roundtrip(self, tmp_path):
        papers = [
            paper_obj("p1", ["a1"], 1990, refs=["p2"]),
            paper_obj("p2", ["a2", "a1"], 1985),
            paper_obj("p3", ["a3"], 2000, refs=["p1", "p2"]),
        ]
        ppath, mpath = write_corpus(tmp_path, papers, [mship_obj("a1", "a2")])
        result = ingest_corpus(ppath, mpath, BASE_CFG)
        idx = result.index
        assert idx.n_papers == 3
        assert idx.references_of("p3") == ("p1", "p2")
        assert idx.citers_of("p2") == ("p1", "p3")
        assert idx.papers_of("a1") == ("p2", "p1")  # sorted by year
        assert idx.meta("p2").author_count == 2
        assert len(result.mentorships) == 1

    def test_year_window_filter_counted(self, tmp_path):
        papers = [
            paper_obj("p1", ["a1"], 1955),
            paper_obj("p2", ["a1"], 1990),
            paper_obj("p3", ["a2"], 2021),
        ]
        ppath, mpath = write_corpus(tmp_path, papers, [mship_obj("a1", "a2")])
        result = ingest_corpus(ppath, mpath, BASE_CFG)
        assert not result.index.has_paper("p1")
        assert result.report.count("papers", "year_out_of_window") == 1
        assert result.report.count("papers", "ingested") == 2

    def test_field_filter(self, tmp_path):
        papers = [
            paper_obj("p1", ["a1"], field="x"),
            paper_obj("p2", ["a2"], field="y"),
        ]
        ments = [mship_obj("a1", "a2", field="x"), mship_obj("a1", "a2", field="y")]
        ppath, mpath = write_corpus(tmp_path, papers, ments)
        cfg = IngestConfig(min_papers=0, field="x")
        result = ingest_corpus(ppath, mpath, cfg)
        assert result.index.has_paper("p1") and not result.index.has_paper("p2")
        assert result.report.count("papers", "field_filtered") == 1
        assert result.report.count("mentorships", "field_filtered") == 1
        assert len(result.mentorships) == 1

    def test_min_papers_eligibility(self, tmp_path):
        papers = [paper_obj(f"p{i}", ["a1"]) for i in range(3)]
        papers.append(paper_obj("q1", ["a2"]))
        ppath, mpath = write_corpus(tmp_path, papers, [mship_obj("a1", "a2")])
        result = ingest_corpus(ppath, mpath, IngestConfig(min_papers=2))
        assert result.mentorships == []
        assert result.report.count("mentorships", "mentee_below_min_papers") == 1
        assert result.report.count("mentorships", "dropped_ineligible") == 1

    def test_duplicate_pair_dedupe(self, tmp_path):
        papers = [paper_obj("p1", ["a1"]), paper_obj("p2", ["a2"])]
        ments = [mship_obj("a1", "a2"), mship_obj("a1", "a2")]
        ppath, mpath = write_corpus(tmp_path, papers, ments)
        result = ingest_corpus(ppath, mpath, BASE_CFG)
        assert len(result.mentorships) == 1
        assert result.report.count("mentorships", "duplicate_pair") == 1

    def test_reference_sanitization(self, tmp_path):
        papers = [paper_obj("p1", ["a1"], refs=["p1", "p2", "p2"]), paper_obj("p2", ["a2"])]
        ppath, mpath = write_corpus(tmp_path, papers, [mship_obj("a1", "a2")])
        result = ingest_corpus(ppath, mpath, BASE_CFG)
        assert result.index.references_of("p1") == ("p2",)
        assert result.report.count("papers", "self_reference_removed") == 1
        assert result.report.count("papers", "duplicate_reference_removed") == 1

    @pytest.mark.parametrize(
        "bad",
        [
            {"author_ids": ["a"], "pub_year": 2000, "field": "f", "reference_ids": []},
            paper_obj("p", [], 2000),
            paper_obj("p", ["a"], 1899),
            paper_obj("p", ["a"], 2101),
            paper_obj("p", ["a"], "2000"),
            paper_obj("p", ["a"], True),
            {**paper_obj("p", ["a"]), "reference_ids": "p2"},
            {**paper_obj("p", ["a"]), "paper_id": ""},
        ],
    )
    def test_malformed_paper(self, tmp_path, bad):
        ppath, mpath = write_corpus(tmp_path, [bad], [mship_obj("a", "b")])
        with pytest.raises(MalformedRecord) as exc:
            ingest_corpus(ppath, mpath, BASE_CFG)
        assert exc.value.line_no == 1

    def test_invalid_json_line_number(self, tmp_path):
        ppath = tmp_path / "papers.jsonl"
        ppath.write_text(json.dumps(paper_obj("p1", ["a"])) + "\n{not json\n")
        mpath = tmp_path / "m.jsonl"
        mpath.write_text(json.dumps(mship_obj("a", "b")) + "\n")
        with pytest.raises(MalformedRecord) as exc:
            ingest_corpus(ppath, mpath, BASE_CFG)
        assert exc.value.line_no == 2

    def test_duplicate_paper_id(self, tmp_path):
        papers = [paper_obj("p1", ["a"]), paper_obj("p1", ["b"])]
        ppath, mpath = write_corpus(tmp_path, papers, [mship_obj("a", "b")])
        with pytest.raises(DuplicatePaperId):
            ingest_corpus(ppath, mpath, BASE_CFG)

    def test_mentor_equals_mentee(self, tmp_path):
        ppath, mpath = write_corpus(
            tmp_path, [paper_obj("p1", ["a"])], [mship_obj("a", "a")]
        )
        with pytest.raises(MalformedRecord):
            ingest_corpus(ppath, mpath, BASE_CFG)

    def test_empty_corpus(self, tmp_path):
        ppath, mpath = write_corpus(
            tmp_path, [paper_obj("p1", ["a"], 1900)], [mship_obj("a", "b")]
        )
        with pytest.raises(EmptyCorpus):
            ingest_corpus(ppath, mpath, BASE_CFG)

    def test_null_start_year_allowed(self, tmp_path):
        ppath, mpath = write_corpus(
            tmp_path,
            [paper_obj("p1", ["a"]), paper_obj("p2", ["b"])],
            [mship_obj("a", "b", start_year=None)],
        )
        result = ingest_corpus(ppath, mpath, BASE_CFG)
        assert result.mentorships[0].start_year is None


class TestIndex:
    def test_author_dedup(self):
        idx = make_index(paper("p1", ("a", "a", "b")))
        assert idx.authors_of("p1") == ("a", "b")
        assert idx.meta("p1").author_count == 2

    def test_dangling_refs_kept_forward_only(self):
        idx = make_index(paper("p1", "a", refs=("ghost",)))
        assert idx.references_of("p1") == ("ghost",)
        with pytest.raises(UnknownPaper):
            idx.citers_of("ghost")

    def test_unknown_lookups(self):
        idx = make_index(paper("p1", "a"))
        with pytest.raises(UnknownPaper):
            idx.meta("nope")
        with pytest.raises(UnknownAuthor):
            idx.papers_of("nobody")

    @settings(max_examples=50, deadline=None)
    @given(st.data())
    def test_cited_by_is_transpose(self, data):
        n = data.draw(st.integers(1, 10))
        ids = [f"p{i}" for i in range(n)]
        records = []
        for pid in ids:
            refs = data.draw(
                st.lists(st.sampled_from(ids + ["dangling"]), max_size=4, unique=True)
            )
            refs = [r for r in refs if r != pid]
            records.append(paper(pid, "a", refs=tuple(refs)))
        idx = index_from_records(records)
        for p in ids:
            for q in ids:
                assert (q in idx.cited_by_map[p]) == (p in idx.citing_map[q])
            assert idx.cited_by_map[p] == tuple(sorted(idx.cited_by_map[p]))


class TestCohortFlags:
    def test_flags(self):
        idx = make_index(
            paper("p1", "a", year=1980),
            paper("p2", "a", year=2011),
            paper("p3", "a", year=1995),
        )
        flags = cohort_flags("a", idx, min_papers=3)
        assert flags == CohortFlags(
            is_eligible_author=True,
            first_pub_year=1980,
            career_len=31,
            pre_1990_starter=True,
            career_30y=True,
        )

    def test_short_career(self):
        idx = make_index(paper("p1", "a", year=1992), paper("p2", "a", year=2000))
        flags = cohort_flags("a", idx, min_papers=3)
        assert not flags.is_eligible_author
        assert not flags.pre_1990_starter
        assert not flags.career_30y
        assert flags.career_len == 8


class TestFiveYearCitations:
    def test_window_inclusive(self):
        idx = make_index(
            paper("p", "a", year=2000),
            paper("c0", "x", year=2000, refs=("p",)),
            paper("c5", "x2", year=2005, refs=("p",)),
            paper("c6", "x3", year=2006, refs=("p",)),
            paper("cpast", "x4", year=1999, refs=("p",)),
        )
        assert five_year_citations("p", idx) == 2
        assert five_year_citations("p", idx, window=6) == 3
