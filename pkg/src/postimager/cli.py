"""Batch entry points: corpus extraction, the four-method rating-study
pipeline, ratings statistics, topic-model runs, and the service runner.

Everything reads JSON-lines and emits JSON, deterministic under --seed
with the mock backends. Exit code 0 iff no error records were emitted.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path

from . import promptgen
from .backends import GenRequest, MockGenerator, MockRetrieval, RemoteGenerator, RemoteRetrieval, RetrievalQuery
from .config import AppConfig, load_config
from .corpus import CorpusFormatError, CorpusPost, build_index, load_corpus
from .emotion import EmotionLabel, LexiconBackend, classify
from .errors import BackendUnavailableError, ProtocolError
from .evalkit import (
    DegenerateSampleError,
    GroupSummary,
    RatingsTable,
    aggregate_raters,
    anova_from_summary,
    anova_oneway,
    bonferroni_pairwise,
    wilcoxon_signed_rank,
)
from .evalkit.lda import EmptyCorpusError, lda_select_k, lda_fit
from .evalkit.stats import METHODS, METRICS
from .promptgen import PostDraft, PromptMode
from .textkit import tfidf_top_k

STUDY_METHODS = ("baseline", "content_based", "keyword_based", "emo_keyword_based")


def _println(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _stable_seed(*parts: object) -> int:
    digest = hashlib.sha256("|".join(str(p) for p in parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big")


def _post_payloads(post: CorpusPost, index, emotion_backend) -> list[dict]:
    """The four per-post payload records of the rating-study pipeline."""
    draft = PostDraft(title=post.title, body=post.selftext)
    extracted = promptgen.extract_tags(draft, index)
    records = []

    query_terms = tfidf_top_k(index, post.id, 5)
    records.append(
        {"post_id": post.id, "method": "baseline", "query_terms": query_terms}
    )
    content = promptgen.build_prompt(PromptMode.CONTENT_BASED, draft)
    records.append(
        {
            "post_id": post.id,
            "method": "content_based",
            "prompt": promptgen.serialize(content),
        }
    )
    for method, mode in (
        ("keyword_based", PromptMode.KEYWORD_BASED),
        ("emo_keyword_based", PromptMode.EMO_KEYWORD_BASED),
    ):
        spec = promptgen.build_prompt(
            mode, draft, extracted, emotion_backend=emotion_backend
        )
        records.append(
            {
                "post_id": post.id,
                "method": method,
                "prompt": promptgen.serialize(spec),
                "excluded": list(spec.excluded),
            }
        )
    return records


def cmd_extract(args: argparse.Namespace) -> int:
    try:
        posts = load_corpus(args.corpus)
    except (CorpusFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.post_id:
        posts = [p for p in posts if p.id == args.post_id]
        if not posts:
            print(f"error: post id {args.post_id} not in corpus", file=sys.stderr)
            return 1
    index = build_index(posts) if posts else None
    backend = LexiconBackend()
    for post in posts:
        draft = PostDraft(title=post.title, body=post.selftext)
        extracted = promptgen.extract_tags(draft, index)
        label = classify(post.selftext, backend)
        etag = promptgen.emotion_tag(post.selftext, backend)
        ttag = promptgen.title_tag(post.title)
        extras = [t for t in (etag, ttag) if t is not None]
        merged = promptgen.merge_tags(extracted, extras)
        kept, excluded = [], []
        from .lexicons import filter_negative

        kept_texts, excluded = filter_negative([t.text for t in merged])
        kept_set = set(kept_texts)
        kept = [t for t in merged if t.text in kept_set]
        if merged and not kept:
            print(
                f"warning: every keyword of post {post.id} is on the exclusion list",
                file=sys.stderr,
            )
        _println(
            {
                "post_id": post.id,
                "emotion": None if label == EmotionLabel.NEUTRAL else label.value,
                "title_keyword": None if ttag is None else ttag.text,
                "tags": [
                    {"text": t.text, "weight": t.weight, "origin": t.origin.value}
                    for t in kept
                ],
                "excluded": list(excluded),
            }
        )
    return 0


def cmd_study1(args: argparse.Namespace) -> int:
    try:
        posts = load_corpus(args.corpus)
    except (CorpusFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out_dir = Path(args.out)
    images_dir = out_dir / "images"
    images_dir.mkdir(parents=True, exist_ok=True)

    config = load_config(args.config) if args.config else AppConfig()
    if args.backend == "remote":
        generator = RemoteGenerator(config.txt2img_endpoint, config.txt2img_timeout_ms)
        retrieval = RemoteRetrieval(config.retrieval_endpoint, config.retrieval_timeout_ms)
    else:
        generator = MockGenerator()
        retrieval = MockRetrieval()

    index = build_index(posts)
    emotion_backend = LexiconBackend()

    all_payloads = []
    for post in posts:
        all_payloads.extend(_post_payloads(post, index, emotion_backend))
    with open(out_dir / "payloads.jsonl", "w", encoding="utf-8") as fh:
        for record in all_payloads:
            fh.write(json.dumps(record, sort_keys=True) + "\n")

    emitted = 0
    try:
        for record in all_payloads:
            method = record["method"]
            name = f"{record['post_id']}_{method}.png"
            if method == "baseline":
                data = retrieval.first_image(
                    RetrievalQuery(terms=tuple(record["query_terms"]))
                )
            else:
                seed = _stable_seed(args.seed, record["post_id"], method)
                result = generator.txt2img(
                    GenRequest(
                        prompt=record["prompt"],
                        batch_size=1,
                        seed=seed,
                        steps=config.gen_steps,
                        width=config.gen_width,
                        height=config.gen_height,
                    )
                )
                data = result.images[0]
            (images_dir / name).write_bytes(data)
            emitted += 1
    except (BackendUnavailableError, ProtocolError) as exc:
        print(
            f"error: backend failed after {emitted} images: {exc}", file=sys.stderr
        )
        return 1
    _println(
        {
            "posts": len(posts),
            "payload_records": len(all_payloads),
            "images": emitted,
            "out_dir": str(out_dir),
        }
    )
    return 0


def _ratings_method_groups(table: RatingsTable) -> dict[str, dict[str, list[float]]]:
    """metric -> method -> per-post mean scores, posts sorted by id."""
    means = aggregate_raters(table)
    grouped: dict[str, dict[str, dict[str, float]]] = {
        metric: {method: {} for method in METHODS} for metric in METRICS
    }
    for (post_id, method, metric), mean in means.items():
        grouped[metric][method][post_id] = mean
    out: dict[str, dict[str, list[float]]] = {}
    for metric, per_method in grouped.items():
        methods = {
            method: [scores[k] for k in sorted(scores)]
            for method, scores in per_method.items()
            if scores
        }
        if methods:
            out[metric] = methods
    return out


def _read_summary_csv(path: Path) -> dict[str, list[GroupSummary]]:
    """metric,method,mean,sd,n rows -> per-metric group summaries."""
    per_metric: dict[str, dict[str, GroupSummary]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for lineno, row in enumerate(reader, start=2):
            try:
                per_metric.setdefault(row["metric"], {})[row["method"]] = GroupSummary(
                    mean=float(row["mean"]), sd=float(row["sd"]), n=int(row["n"])
                )
            except (KeyError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad summary row: {exc}") from exc
    return {
        metric: [groups[m] for m in METHODS if m in groups]
        for metric, groups in per_metric.items()
    }


def _print_anova_table(report: dict) -> None:
    print(f"{'Factor':<20}{'F':>10}{'df':>12}{'p':>14}")
    for metric, result in report.items():
        df = f"({result['df_between']}, {result['df_within']})"
        print(f"{metric:<20}{result['f']:>10.3f}{df:>12}{result['p']:>14.6g}")


def cmd_stats(args: argparse.Namespace) -> int:
    path = Path(args.ratings)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            header = next(csv.reader(fh), [])
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        if args.test == "anova":
            if set(header) == {"metric", "method", "mean", "sd", "n"}:
                summaries = _read_summary_csv(path)
                report = {
                    metric: vars(anova_from_summary(groups))
                    for metric, groups in summaries.items()
                }
            else:
                table = RatingsTable.from_csv(path)
                report = {
                    metric: vars(anova_oneway(list(methods.values())))
                    for metric, methods in _ratings_method_groups(table).items()
                }
            _print_anova_table(report)
            _println({"test": "anova", "metrics": report})
        elif args.test == "bonferroni":
            table = RatingsTable.from_csv(path)
            report = {}
            for metric, methods in _ratings_method_groups(table).items():
                names = list(methods)
                pairs = bonferroni_pairwise(list(methods.values()))
                report[metric] = [
                    {
                        "pair": [names[r.group_a], names[r.group_b]],
                        "t": r.t,
                        "p_raw": r.p_raw,
                        "p_adjusted": r.p_adjusted,
                    }
                    for r in pairs
                ]
            _println({"test": "bonferroni", "metrics": report})
        elif args.test == "wilcoxon":
            xs, ys = [], []
            with open(path, newline="", encoding="utf-8") as fh:
                reader = csv.DictReader(fh)
                if reader.fieldnames is None or not {"x", "y"} <= set(reader.fieldnames):
                    raise ValueError("wilcoxon CSV needs columns x and y")
                for lineno, row in enumerate(reader, start=2):
                    try:
                        xs.append(float(row["x"]))
                        ys.append(float(row["y"]))
                    except ValueError as exc:
                        raise ValueError(f"{path}:{lineno}: bad pair: {exc}") from exc
            result = wilcoxon_signed_rank(xs, ys)
            _println(
                {
                    "test": "wilcoxon",
                    "n_effective": result.n_effective,
                    "w_plus": result.w_plus,
                    "z": result.z,
                    "p_two_sided": result.p_two_sided,
                    "method": result.method.value,
                }
            )
    except DegenerateSampleError as exc:
        print(f"error: degenerate sample: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_lda(args: argparse.Namespace) -> int:
    try:
        posts = load_corpus(args.corpus)
    except (CorpusFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    from .textkit import preprocess_for_lda

    docs = preprocess_for_lda([p.full_text for p in posts])
    docs = [d for d in docs if d]
    try:
        if args.kmin == args.kmax:
            model = lda_fit(docs, args.kmin, sweeps=args.sweeps, seed=args.seed)
            from .evalkit.lda import lda_perplexity

            per_k = {args.kmin: lda_perplexity(model, docs)}
            best_k = args.kmin
        else:
            best_k, per_k = lda_select_k(
                docs, range(args.kmin, args.kmax + 1), sweeps=args.sweeps, seed=args.seed
            )
            model = lda_fit(docs, best_k, sweeps=args.sweeps, seed=args.seed)
    except (EmptyCorpusError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for k in sorted(per_k):
        print(f"k={k:<3d} perplexity={per_k[k]:.4f}")
    topics = {
        str(t): model.top_words(t, 8) for t in range(model.k)
    }
    for t in range(model.k):
        print(f"topic {t}: {' '.join(topics[str(t)])}")
    _println({"best_k": best_k, "perplexity": {str(k): v for k, v in per_k.items()}, "topics": topics})
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from . import service

    config = load_config(args.config) if args.config else load_config()
    service.run(config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="postimager")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="emit keyword tags per corpus post")
    p.add_argument("--corpus", required=True)
    p.add_argument("--post-id")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("study1", help="emit the four-method payloads and images")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--backend", choices=("mock", "remote"), default="mock")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config")
    p.set_defaults(func=cmd_study1)

    p = sub.add_parser("stats", help="run a ratings analysis")
    p.add_argument("--ratings", required=True)
    p.add_argument("--test", choices=("anova", "wilcoxon", "bonferroni"), required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("lda", help="fit topic models over a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--kmin", type=int, default=2)
    p.add_argument("--kmax", type=int, default=20)
    p.add_argument("--sweeps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_lda)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
