"""Statistics and corpus-analysis toolkit for the rating studies."""

from .lda import (
    EmptyCorpusError,
    LdaModel,
    lda_fit,
    lda_perplexity,
    lda_select_k,
)
from .stats import (
    AnovaResult,
    DegenerateSampleError,
    GroupSummary,
    PairwiseResult,
    Phq9Band,
    RatingEntry,
    RatingsTable,
    WilcoxonMethod,
    WilcoxonResult,
    aggregate_raters,
    anova_from_summary,
    anova_oneway,
    bonferroni_pairwise,
    f_sf,
    normal_sf,
    phq9_band,
    regularized_incomplete_beta,
    t_sf_two_sided,
    wilcoxon_signed_rank,
)

__all__ = [
    "AnovaResult",
    "DegenerateSampleError",
    "EmptyCorpusError",
    "GroupSummary",
    "LdaModel",
    "PairwiseResult",
    "Phq9Band",
    "RatingEntry",
    "RatingsTable",
    "WilcoxonMethod",
    "WilcoxonResult",
    "aggregate_raters",
    "anova_from_summary",
    "anova_oneway",
    "bonferroni_pairwise",
    "f_sf",
    "lda_fit",
    "lda_perplexity",
    "lda_select_k",
    "normal_sf",
    "phq9_band",
    "regularized_incomplete_beta",
    "t_sf_two_sided",
    "wilcoxon_signed_rank",
]
