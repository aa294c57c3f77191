#!/usr/bin/env python3
"""Recompute the rating-study ANOVA from the published per-method summary
statistics (means, SDs, n=20 per method) and print the F table."""

import sys
from pathlib import Path

from postimager.cli import main

DEFAULT_SUMMARY = Path(__file__).parent.parent / "tests" / "fixtures" / "published_summary.csv"

if __name__ == "__main__":
    ratings = sys.argv[1] if len(sys.argv) > 1 else str(DEFAULT_SUMMARY)
    sys.exit(main(["stats", "--ratings", ratings, "--test", "anova"]))
