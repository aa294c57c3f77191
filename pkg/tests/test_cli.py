import json
from pathlib import Path

import pytest

from postimager.cli import main
from postimager.corpus import DEMO_CORPUS_PATH

FIXTURES = Path(__file__).parent / "fixtures"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- extract -----------------------------------------------------------------


def test_extract_demo_corpus(capsys):
    code, out, err = run_cli(capsys, "extract", "--corpus", str(DEMO_CORPUS_PATH))
    assert code == 0
    lines = [json.loads(l) for l in out.splitlines()]
    assert len(lines) == 20
    for record in lines:
        for tag in record["tags"]:
            if tag["origin"] in ("emotion", "title"):
                assert tag["weight"] == 1.3


def test_extract_single_post(capsys):
    code, out, _ = run_cli(
        capsys, "extract", "--corpus", str(DEMO_CORPUS_PATH), "--post-id", "demo-001"
    )
    assert code == 0
    (record,) = [json.loads(l) for l in out.splitlines()]
    assert record["post_id"] == "demo-001"
    assert record["emotion"] == "sadness"
    assert record["title_keyword"] == "hopeless"


def test_extract_empty_corpus(tmp_path, capsys):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    code, out, _ = run_cli(capsys, "extract", "--corpus", str(empty))
    assert code == 0
    assert out == ""


def test_extract_malformed_line_reports_number(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "a", "title": "t", "selftext": "b"}\n{oops\n')
    code, _, err = run_cli(capsys, "extract", "--corpus", str(bad))
    assert code == 1
    assert ":2:" in err


def test_extract_all_negative_post_warns(tmp_path, capsys):
    corpus = tmp_path / "neg.jsonl"
    corpus.write_text(
        json.dumps(
            {"id": "n1", "title": "", "selftext": "Suicide.", "created_utc": 0}
        )
        + "\n"
    )
    code, out, err = run_cli(capsys, "extract", "--corpus", str(corpus))
    assert code == 0
    (record,) = [json.loads(l) for l in out.splitlines()]
    assert record["tags"] == []
    assert record["excluded"] == ["suicide"]
    assert "exclusion list" in err


# --- study1 ------------------------------------------------------------------


def test_study1_emits_80_images_and_4_payloads_per_post(tmp_path, capsys):
    out_dir = tmp_path / "study1"
    code, out, _ = run_cli(
        capsys,
        "study1",
        "--corpus", str(DEMO_CORPUS_PATH),
        "--out", str(out_dir),
        "--backend", "mock",
        "--seed", "7",
    )
    assert code == 0
    summary = json.loads(out.strip())
    assert summary["posts"] == 20
    assert summary["payload_records"] == 80
    assert summary["images"] == 80

    images = sorted((out_dir / "images").glob("*.png"))
    assert len(images) == 80

    payloads = [
        json.loads(l) for l in (out_dir / "payloads.jsonl").read_text().splitlines()
    ]
    assert len(payloads) == 80
    per_post: dict = {}
    for record in payloads:
        per_post.setdefault(record["post_id"], []).append(record["method"])
    assert all(
        methods == ["baseline", "content_based", "keyword_based", "emo_keyword_based"]
        for methods in per_post.values()
    )
    for record in payloads:
        if record["method"] == "baseline":
            assert len(record["query_terms"]) == 5


def test_study1_deterministic_under_seed(tmp_path, capsys):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    for out_dir in (out_a, out_b):
        code, _, _ = run_cli(
            capsys,
            "study1",
            "--corpus", str(DEMO_CORPUS_PATH),
            "--out", str(out_dir),
            "--seed", "13",
        )
        assert code == 0
    assert (out_a / "payloads.jsonl").read_bytes() == (out_b / "payloads.jsonl").read_bytes()
    for image_a in sorted((out_a / "images").glob("*.png")):
        image_b = out_b / "images" / image_a.name
        assert image_a.read_bytes() == image_b.read_bytes()


def test_study1_single_post(tmp_path, capsys):
    corpus = tmp_path / "one.jsonl"
    corpus.write_text(
        json.dumps(
            {
                "id": "solo",
                "title": "Feeling hopeless",
                "selftext": "I cry alone every night under pressure.",
                "created_utc": 0,
            }
        )
        + "\n"
    )
    out_dir = tmp_path / "out"
    code, out, _ = run_cli(
        capsys, "study1", "--corpus", str(corpus), "--out", str(out_dir)
    )
    assert code == 0
    payloads = (out_dir / "payloads.jsonl").read_text().splitlines()
    assert len(payloads) == 4


def test_study1_remote_dead_endpoint_keeps_payloads(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(
        json.dumps(
            {
                "txt2img_kind": "remote",
                "txt2img_endpoint": "http://127.0.0.1:9/txt2img",
                "txt2img_timeout_ms": 200,
                "retrieval_kind": "remote",
                "retrieval_endpoint": "http://127.0.0.1:9/search",
                "retrieval_timeout_ms": 200,
            }
        )
    )
    out_dir = tmp_path / "out"
    code, _, err = run_cli(
        capsys,
        "study1",
        "--corpus", str(DEMO_CORPUS_PATH),
        "--out", str(out_dir),
        "--backend", "remote",
        "--config", str(config),
    )
    assert code == 1
    assert "backend failed" in err
    assert (out_dir / "payloads.jsonl").exists()
    payloads = (out_dir / "payloads.jsonl").read_text().splitlines()
    assert len(payloads) == 80


# --- stats -------------------------------------------------------------------


def test_stats_anova_summary_reproduces_published_f(capsys):
    code, out, _ = run_cli(
        capsys,
        "stats",
        "--ratings", str(FIXTURES / "published_summary.csv"),
        "--test", "anova",
    )
    assert code == 0
    report = json.loads(out.splitlines()[-1])
    f_values = {m: r["f"] for m, r in report["metrics"].items()}
    assert f_values["visual_quality"] == pytest.approx(7.251, abs=0.01)
    assert f_values["topic_relevance"] == pytest.approx(8.101, abs=0.01)
    assert f_values["emotion_relevance"] == pytest.approx(9.925, abs=0.01)


def test_stats_anova_raw_matches_direct_call(tmp_path, capsys):
    import random

    rng = random.Random(5)
    rows = ["post_id,method,rater_id,metric,score"]
    for post in range(6):
        for method in ("baseline", "content_based", "keyword_based", "emo_keyword_based"):
            for rater in range(3):
                rows.append(
                    f"p{post},{method},r{rater},visual_quality,{rng.randint(1, 5)}"
                )
    path = tmp_path / "ratings.csv"
    path.write_text("\n".join(rows) + "\n")
    code, out, _ = run_cli(capsys, "stats", "--ratings", str(path), "--test", "anova")
    assert code == 0
    report = json.loads(out.splitlines()[-1])

    from postimager.cli import _ratings_method_groups
    from postimager.evalkit import RatingsTable, anova_oneway

    groups = _ratings_method_groups(RatingsTable.from_csv(path))["visual_quality"]
    direct = anova_oneway(list(groups.values()))
    assert report["metrics"]["visual_quality"]["f"] == pytest.approx(direct.f)


def test_stats_wilcoxon(tmp_path, capsys):
    path = tmp_path / "pairs.csv"
    path.write_text("x,y\n1,2\n3,1\n5,2\n4,4\n6,3\n")
    code, out, _ = run_cli(capsys, "stats", "--ratings", str(path), "--test", "wilcoxon")
    assert code == 0
    report = json.loads(out.strip())
    assert report["method"] == "exact"
    assert report["n_effective"] == 4


def test_stats_wilcoxon_degenerate_exit_code(tmp_path, capsys):
    path = tmp_path / "pairs.csv"
    path.write_text("x,y\n1,1\n2,2\n")
    code, _, err = run_cli(capsys, "stats", "--ratings", str(path), "--test", "wilcoxon")
    assert code == 2
    assert "degenerate" in err


def test_stats_schema_violation_reports_row(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("post_id,method,rater_id,metric,score\np1,baseline,r1,visual_quality,9\n")
    code, _, err = run_cli(capsys, "stats", "--ratings", str(path), "--test", "anova")
    assert code == 1
    assert "score out of range" in err


def test_stats_bonferroni(tmp_path, capsys):
    import random

    rng = random.Random(3)
    rows = ["post_id,method,rater_id,metric,score"]
    for post in range(8):
        for method in ("baseline", "content_based", "keyword_based", "emo_keyword_based"):
            rows.append(f"p{post},{method},r0,emotion_relevance,{rng.randint(1, 5)}")
    path = tmp_path / "ratings.csv"
    path.write_text("\n".join(rows) + "\n")
    code, out, _ = run_cli(capsys, "stats", "--ratings", str(path), "--test", "bonferroni")
    assert code == 0
    report = json.loads(out.strip())
    assert len(report["metrics"]["emotion_relevance"]) == 6


# --- lda ---------------------------------------------------------------------


def test_lda_single_k(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "lda",
        "--corpus", str(DEMO_CORPUS_PATH),
        "--kmin", "1",
        "--kmax", "1",
        "--sweeps", "5",
        "--seed", "0",
    )
    assert code == 0
    report = json.loads(out.splitlines()[-1])
    assert report["best_k"] == 1
    assert len(report["topics"]["0"]) == 8


def test_lda_k_range(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "lda",
        "--corpus", str(DEMO_CORPUS_PATH),
        "--kmin", "2",
        "--kmax", "3",
        "--sweeps", "5",
        "--seed", "1",
    )
    assert code == 0
    report = json.loads(out.splitlines()[-1])
    assert set(report["perplexity"]) == {"2", "3"}
    best = report["best_k"]
    assert report["perplexity"][str(best)] == min(report["perplexity"].values())


def test_lda_empty_corpus_errors(tmp_path, capsys):
    corpus = tmp_path / "tiny.jsonl"
    corpus.write_text(
        json.dumps({"id": "t", "title": "", "selftext": "the of and", "created_utc": 0})
        + "\n"
    )
    code, _, err = run_cli(
        capsys, "lda", "--corpus", str(corpus), "--kmin", "2", "--kmax", "2"
    )
    assert code == 1
    assert err
