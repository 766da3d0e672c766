"""Pipeline configuration, caching, and deterministic outputs."""

import hashlib
import json

import pytest

from cocite.errors import InvalidConfig
from cocite.pipeline import (
    PipelineConfig,
    apply_config_values,
    assign_elites,
    build_profiles,
    corpus_digest,
    load_config_file,
    pair_cache_key,
    profile_table,
    regression_table,
    run_pipeline,
    write_csv,
)
from cocite.corpus import ingest_corpus
from cocite.synth import SynthConfig, synthesize_corpus, write_corpus


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    write_corpus(synthesize_corpus(SynthConfig(n_pairs=4, seed=3)), out)
    return out


def make_config(corpus_dir, out_dir, **kwargs) -> PipelineConfig:
    config = PipelineConfig(
        papers=str(corpus_dir / "papers.jsonl"),
        mentorships=str(corpus_dir / "mentorships.jsonl"),
        out=str(out_dir),
    )
    for k, v in kwargs.items():
        setattr(config, k, v)
    return config


class TestConfig:
    def test_hash_ignores_volatile_fields(self):
        a = PipelineConfig(papers="x.jsonl", mentorships="y.jsonl", out="o1", workers=1)
        b = PipelineConfig(papers="z.jsonl", mentorships="w.jsonl", out="o2", workers=8)
        assert a.config_hash() == b.config_hash()

    def test_hash_tracks_analysis_knobs(self):
        a = PipelineConfig()
        b = PipelineConfig(gamma=1.5)
        assert a.config_hash() != b.config_hash()

    def test_config_file_parsing(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("# comment\n\ngamma = 2.0\nmin_papers=5\nfield=fieldA\n")
        values = load_config_file(path)
        assert values == {"gamma": "2.0", "min_papers": "5", "field": "fieldA"}

    def test_config_file_rejects_bare_words(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("gamma\n")
        with pytest.raises(InvalidConfig):
            load_config_file(path)

    def test_apply_coerces_types(self):
        config = PipelineConfig()
        apply_config_values(
            config,
            {
                "gamma": "2.5",
                "min_papers": "7",
                "elite_global": "true",
                "regression_30y": "no",
                "field": "none",
            },
        )
        assert config.gamma == 2.5
        assert config.min_papers == 7
        assert config.elite_global is True
        assert config.regression_30y is False
        assert config.field is None

    def test_apply_rejects_unknown_and_private_keys(self):
        config = PipelineConfig()
        with pytest.raises(InvalidConfig):
            apply_config_values(config, {"nope": "1"})
        with pytest.raises(InvalidConfig):
            apply_config_values(config, {"_VOLATILE": "x"})
        with pytest.raises(InvalidConfig):
            apply_config_values(config, {"elite_global": "maybe"})


class TestCsv:
    def test_value_formatting(self, tmp_path):
        path = tmp_path / "t.csv"
        write_csv(path, ["a", "b", "c", "d"], [(0.1, True, None, "x")])
        assert path.read_text() == "a,b,c,d\n0.1,true,,x\n"

    def test_float_repr_round_trips(self, tmp_path):
        path = tmp_path / "t.csv"
        value = 1 / 3
        write_csv(path, ["v"], [(value,)])
        cell = path.read_text().splitlines()[1]
        assert float(cell) == value


class TestCacheKeys:
    def test_key_depends_on_corpus_params_and_pair(self, corpus_dir):
        digest = corpus_digest(
            corpus_dir / "papers.jsonl", corpus_dir / "mentorships.jsonl"
        )
        config = PipelineConfig()
        result = ingest_corpus(
            corpus_dir / "papers.jsonl",
            corpus_dir / "mentorships.jsonl",
            config.ingest_config(),
        )
        m1, m2 = result.mentorships[:2]
        k_base = pair_cache_key(digest, m1, config.pair_params())
        assert pair_cache_key(digest, m1, config.pair_params()) == k_base
        assert pair_cache_key(digest, m2, config.pair_params()) != k_base
        other = PipelineConfig(gamma=2.0)
        assert pair_cache_key(digest, m1, other.pair_params()) != k_base
        assert pair_cache_key("0" * 64, m1, config.pair_params()) != k_base


class TestBuildProfiles:
    def test_cache_round_trip(self, corpus_dir, tmp_path):
        config = make_config(corpus_dir, tmp_path)
        result = ingest_corpus(config.papers, config.mentorships, config.ingest_config())
        digest = corpus_digest(config.papers, config.mentorships)
        cache = tmp_path / "cache"

        cold = build_profiles(result.index, result.mentorships, config, digest, cache)
        assert cold.cache_hits == 0
        assert cold.cache_misses == len(result.mentorships)

        warm = build_profiles(result.index, result.mentorships, config, digest, cache)
        assert warm.cache_hits == len(result.mentorships)
        assert warm.cache_misses == 0
        assert warm.profiles == cold.profiles

    def test_no_cache_dir_always_builds(self, corpus_dir, tmp_path):
        config = make_config(corpus_dir, tmp_path)
        result = ingest_corpus(config.papers, config.mentorships, config.ingest_config())
        digest = corpus_digest(config.papers, config.mentorships)
        stage = build_profiles(result.index, result.mentorships, config, digest, None)
        assert stage.cache_hits == 0
        assert len(stage.profiles) == len(result.mentorships)

    def test_output_order_is_sorted(self, corpus_dir, tmp_path):
        config = make_config(corpus_dir, tmp_path)
        result = ingest_corpus(config.papers, config.mentorships, config.ingest_config())
        digest = corpus_digest(config.papers, config.mentorships)
        shuffled = list(reversed(result.mentorships))
        stage = build_profiles(result.index, shuffled, config, digest, None)
        keys = [(p.field, p.mentor_id, p.mentee_id) for p in stage.profiles]
        assert keys == sorted(keys)


class TestElites:
    def test_flags_filled_in_place(self, corpus_dir, tmp_path):
        config = make_config(corpus_dir, tmp_path, top_fraction=0.5)
        result = ingest_corpus(config.papers, config.mentorships, config.ingest_config())
        digest = corpus_digest(config.papers, config.mentorships)
        stage = build_profiles(result.index, result.mentorships, config, digest, None)
        assign_elites(stage.profiles, config)
        assert all(p.is_elite is not None for p in stage.profiles)
        assert all(p.outperforming is not None for p in stage.profiles)
        for p in stage.profiles:
            if p.outperforming:
                assert p.is_elite and p.mentee_total_impact > p.mentor_total_impact

    def test_empty_cohort_is_a_no_op(self):
        assign_elites([], PipelineConfig())


class TestTables:
    def test_profile_table_column_names(self, corpus_dir, tmp_path):
        config = make_config(corpus_dir, tmp_path)
        result = ingest_corpus(config.papers, config.mentorships, config.ingest_config())
        digest = corpus_digest(config.papers, config.mentorships)
        stage = build_profiles(result.index, result.mentorships, config, digest, None)
        header, rows = profile_table(stage.profiles)
        for required in ("R", "C_e_total", "C_r_total", "ave_distance", "strategy"):
            assert required in header
        assert len(rows) == len(stage.profiles)
        assert all(len(r) == len(header) for r in rows)

    def test_regression_table_filters_cohort(self, corpus_dir, tmp_path):
        config = make_config(corpus_dir, tmp_path)
        result = ingest_corpus(config.papers, config.mentorships, config.ingest_config())
        digest = corpus_digest(config.papers, config.mentorships)
        stage = build_profiles(result.index, result.mentorships, config, digest, None)
        open_table = regression_table(
            stage.profiles, make_config(corpus_dir, tmp_path, regression_30y=False)
        )
        narrow_table = regression_table(stage.profiles, config)
        n_eligible = sum(
            1 for p in stage.profiles if p.career_30y_mte and p.pre_1990_mte
        )
        assert len(open_table["ave_distance"]) == len(stage.profiles)
        assert len(narrow_table["ave_distance"]) == n_eligible


class TestRunPipeline:
    def test_manifest_covers_written_files(self, corpus_dir, tmp_path):
        config = make_config(corpus_dir, tmp_path / "run")
        result = run_pipeline(config)
        manifest = json.loads(result.manifest_path.read_text())
        assert manifest["n_profiles"] == result.n_profiles
        for name, digest in manifest["files"].items():
            path = result.out_dir / name
            assert path.exists()
            assert hashlib.sha256(path.read_bytes()).hexdigest() == digest

    def test_run_stats_are_not_in_manifest(self, corpus_dir, tmp_path):
        config = make_config(corpus_dir, tmp_path / "run")
        result = run_pipeline(config)
        manifest = json.loads(result.manifest_path.read_text())
        assert "run_stats.json" not in manifest["files"]
        stats = json.loads((result.out_dir / "run_stats.json").read_text())
        assert set(stats) == {"cache_hits", "cache_misses", "workers"}
