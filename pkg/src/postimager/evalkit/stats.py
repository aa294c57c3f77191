"""Rating aggregation and the nonparametric/parametric tests for the studies.

The F- and t-distribution tail probabilities go through a local
regularized-incomplete-beta implementation (continued fraction, relative
tolerance 1e-12) so the whole kit runs without a stats dependency; the test
suite cross-checks it against an independent implementation.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

METHODS = ("baseline", "content_based", "keyword_based", "emo_keyword_based")
METRICS = ("visual_quality", "topic_relevance", "emotion_relevance")


class DegenerateSampleError(ValueError):
    """The data carries no usable variation for the requested test."""


@dataclass(frozen=True)
class RatingEntry:
    post_id: str
    method: str
    rater_id: str
    metric: str
    score: int


class RatingsTable:
    """Ratings keyed by (post, method, rater, metric), scores 1..5."""

    def __init__(self, entries: list[RatingEntry]):
        seen = set()
        for e in entries:
            if e.method not in METHODS:
                raise ValueError(f"unknown method: {e.method}")
            if e.metric not in METRICS:
                raise ValueError(f"unknown metric: {e.metric}")
            if not (isinstance(e.score, int) and 1 <= e.score <= 5):
                raise ValueError(f"score out of range: {e.score!r}")
            key = (e.post_id, e.method, e.rater_id, e.metric)
            if key in seen:
                raise ValueError(f"duplicate rating cell: {key}")
            seen.add(key)
        self.entries = list(entries)

    @classmethod
    def from_csv(cls, path: Path) -> "RatingsTable":
        entries = []
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            expected = {"post_id", "method", "rater_id", "metric", "score"}
            if reader.fieldnames is None or set(reader.fieldnames) != expected:
                raise ValueError(
                    f"ratings CSV must have header {sorted(expected)}, "
                    f"got {reader.fieldnames}"
                )
            for lineno, row in enumerate(reader, start=2):
                try:
                    entries.append(
                        RatingEntry(
                            post_id=row["post_id"],
                            method=row["method"],
                            rater_id=row["rater_id"],
                            metric=row["metric"],
                            score=int(row["score"]),
                        )
                    )
                except (ValueError, KeyError) as exc:
                    raise ValueError(f"{path}:{lineno}: bad rating row: {exc}") from exc
        return cls(entries)


def aggregate_raters(table: RatingsTable) -> dict[tuple[str, str, str], float]:
    """Mean score per (post, method, metric) across raters."""
    sums: dict[tuple[str, str, str], float] = {}
    counts: Counter[tuple[str, str, str]] = Counter()
    for e in table.entries:
        key = (e.post_id, e.method, e.metric)
        sums[key] = sums.get(key, 0.0) + e.score
        counts[key] += 1
    return {key: sums[key] / counts[key] for key in sums}


# --- distribution plumbing -------------------------------------------------

_BETA_TOL = 1e-12
_BETA_MAX_ITER = 500


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_TOL:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x out of range: {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # The continued fraction converges fast for x < (a+1)/(a+b+2);
    # otherwise use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def f_sf(f: float, df1: int, df2: int) -> float:
    """P(F >= f) for the F distribution.

    The beta argument is built directly on whichever side of the split is
    small, so no 1-x cancellation happens near either tail.
    """
    if math.isinf(f):
        return 0.0
    if f <= 0.0:
        return 1.0
    if df1 * f <= df2:
        xc = df1 * f / (df2 + df1 * f)
        return 1.0 - regularized_incomplete_beta(df1 / 2.0, df2 / 2.0, xc)
    x = df2 / (df2 + df1 * f)
    return regularized_incomplete_beta(df2 / 2.0, df1 / 2.0, x)


def t_sf_two_sided(t: float, df: int) -> float:
    """Two-sided P(|T| >= |t|) for Student's t; conditioned like f_sf."""
    if t == 0.0:
        return 1.0
    t2 = t * t
    if t2 <= df:
        xc = t2 / (df + t2)
        return 1.0 - regularized_incomplete_beta(0.5, df / 2.0, xc)
    x = df / (df + t2)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


# --- Wilcoxon signed-rank --------------------------------------------------


class WilcoxonMethod(str, Enum):
    EXACT = "exact"
    NORMAL = "normal"


@dataclass(frozen=True)
class WilcoxonResult:
    n_effective: int
    w_plus: float
    z: float
    p_two_sided: float
    method: WilcoxonMethod


def _average_ranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for idx in order[i : j + 1]:
            ranks[idx] = avg
        i = j + 1
    return ranks


def _exact_signed_rank_tails(
    doubled_ranks: list[int], w_plus_doubled: int
) -> tuple[float, float]:
    """(P(W+ <= w), P(W+ >= w)) over all 2^n sign assignments.

    Works on doubled ranks so tied (half-integer) average ranks stay exact
    integers. Implemented as a pmf convolution, which enumerates the same
    2^n assignments without materializing them.
    """
    counts: dict[int, int] = {0: 1}
    for r in doubled_ranks:
        nxt: dict[int, int] = {}
        for w, c in counts.items():
            nxt[w] = nxt.get(w, 0) + c
            nxt[w + r] = nxt.get(w + r, 0) + c
        counts = nxt
    total = 2 ** len(doubled_ranks)
    le = sum(c for w, c in counts.items() if w <= w_plus_doubled)
    ge = sum(c for w, c in counts.items() if w >= w_plus_doubled)
    return le / total, ge / total


def _exact_signed_rank_p(doubled_ranks: list[int], w_plus_doubled: int) -> float:
    """Two-sided exact p: min(1, 2 * min(lower tail, upper tail))."""
    le, ge = _exact_signed_rank_tails(doubled_ranks, w_plus_doubled)
    return min(1.0, 2.0 * min(le, ge))


def wilcoxon_signed_rank(
    x: list[float], y: list[float], exact_cutoff: int = 20
) -> WilcoxonResult:
    """Paired Wilcoxon signed-rank test.

    Zero differences are dropped, ties share average ranks. The p-value is
    exact (full sign-assignment enumeration) when the effective n is at most
    ``exact_cutoff``, otherwise a normal approximation with tie correction
    and 0.5 continuity correction.
    """
    if len(x) != len(y):
        raise ValueError("paired samples must have equal length")
    if not x:
        raise ValueError("empty sample")
    diffs = [xi - yi for xi, yi in zip(x, y) if xi != yi]
    n = len(diffs)
    if n == 0:
        raise DegenerateSampleError("all paired differences are zero")

    abs_diffs = [abs(d) for d in diffs]
    ranks = _average_ranks(abs_diffs)
    w_plus = sum(r for r, d in zip(ranks, diffs) if d > 0)

    mu = n * (n + 1) / 4.0
    tie_counts = Counter(abs_diffs).values()
    sigma2 = n * (n + 1) * (2 * n + 1) / 24.0 - sum(t**3 - t for t in tie_counts) / 48.0
    centered = w_plus - mu
    if sigma2 > 0:
        continuity = 0.5 * (1 if centered > 0 else -1 if centered < 0 else 0)
        z = (centered - continuity) / math.sqrt(sigma2)
    else:
        z = 0.0

    if n <= exact_cutoff:
        doubled = [int(round(2 * r)) for r in ranks]
        p = _exact_signed_rank_p(doubled, int(round(2 * w_plus)))
        method = WilcoxonMethod.EXACT
    else:
        p = min(1.0, 2.0 * normal_sf(abs(z)))
        method = WilcoxonMethod.NORMAL
    return WilcoxonResult(n_effective=n, w_plus=w_plus, z=z, p_two_sided=p, method=method)


# --- one-way ANOVA ---------------------------------------------------------


@dataclass(frozen=True)
class AnovaResult:
    f: float
    df_between: int
    df_within: int
    p: float
    eta_squared: float


@dataclass(frozen=True)
class GroupSummary:
    mean: float
    sd: float
    n: int

    def __post_init__(self) -> None:
        if self.sd < 0:
            raise ValueError("sd must be non-negative")
        if self.n < 2:
            raise ValueError("each group needs n >= 2")


def _anova_from_ss(ssb: float, ssw: float, k: int, n_total: int) -> AnovaResult:
    df_between = k - 1
    df_within = n_total - k
    if ssb <= 0.0 and ssw <= 0.0:
        raise DegenerateSampleError("no variance between or within groups")
    if ssw <= 0.0:
        return AnovaResult(math.inf, df_between, df_within, 0.0, 1.0)
    f = (ssb / df_between) / (ssw / df_within)
    return AnovaResult(
        f=f,
        df_between=df_between,
        df_within=df_within,
        p=f_sf(f, df_between, df_within),
        eta_squared=ssb / (ssb + ssw),
    )


def anova_oneway(groups: list[list[float]]) -> AnovaResult:
    """Standard one-way fixed-effects decomposition over raw scores."""
    if len(groups) < 2:
        raise ValueError("need at least two groups")
    if any(len(g) < 2 for g in groups):
        raise ValueError("each group needs at least two observations")
    n_total = sum(len(g) for g in groups)
    grand = sum(sum(g) for g in groups) / n_total
    group_means = [sum(g) / len(g) for g in groups]
    ssb = sum(len(g) * (m - grand) ** 2 for g, m in zip(groups, group_means))
    ssw = sum(sum((v - m) ** 2 for v in g) for g, m in zip(groups, group_means))
    return _anova_from_ss(ssb, ssw, len(groups), n_total)


def anova_from_summary(groups: list[GroupSummary]) -> AnovaResult:
    """One-way ANOVA recovered from per-group (mean, sd, n) summaries."""
    if len(groups) < 2:
        raise ValueError("need at least two groups")
    n_total = sum(g.n for g in groups)
    grand = sum(g.mean * g.n for g in groups) / n_total
    ssb = sum(g.n * (g.mean - grand) ** 2 for g in groups)
    ssw = sum((g.n - 1) * g.sd**2 for g in groups)
    return _anova_from_ss(ssb, ssw, len(groups), n_total)


@dataclass(frozen=True)
class PairwiseResult:
    group_a: int
    group_b: int
    t: float
    p_raw: float
    p_adjusted: float


def bonferroni_pairwise(groups: list[list[float]]) -> list[PairwiseResult]:
    """Pooled-variance pairwise t-tests with Bonferroni adjustment.

    Each raw p is multiplied by the number of unordered pairs and capped
    at 1.
    """
    k = len(groups)
    if k < 2:
        raise ValueError("need at least two groups")
    n_pairs = k * (k - 1) // 2
    results = []
    for a in range(k):
        for b in range(a + 1, k):
            ga, gb = groups[a], groups[b]
            na, nb = len(ga), len(gb)
            if na < 2 or nb < 2:
                raise ValueError("each group needs at least two observations")
            ma, mb = sum(ga) / na, sum(gb) / nb
            ssa = sum((v - ma) ** 2 for v in ga)
            ssb = sum((v - mb) ** 2 for v in gb)
            df = na + nb - 2
            pooled = (ssa + ssb) / df
            if pooled <= 0.0:
                if ma == mb:
                    t = 0.0
                    p_raw = 1.0
                else:
                    raise DegenerateSampleError(
                        "zero pooled variance with unequal means"
                    )
            else:
                t = (ma - mb) / math.sqrt(pooled * (1.0 / na + 1.0 / nb))
                p_raw = t_sf_two_sided(t, df)
            results.append(
                PairwiseResult(a, b, t, p_raw, min(1.0, p_raw * n_pairs))
            )
    return results


# --- PHQ-9 banding ---------------------------------------------------------


class Phq9Band(str, Enum):
    MINIMAL = "minimal"
    MILD = "mild"
    MODERATE = "moderate"
    SEVERE = "severe"


def phq9_band(score: int) -> Phq9Band:
    """Band a PHQ-9 total: 0-4, 5-9, 10-14, 15-27."""
    if not (isinstance(score, int) and 0 <= score <= 27):
        raise ValueError(f"PHQ-9 score out of range: {score!r}")
    if score <= 4:
        return Phq9Band.MINIMAL
    if score <= 9:
        return Phq9Band.MILD
    if score <= 14:
        return Phq9Band.MODERATE
    return Phq9Band.SEVERE
