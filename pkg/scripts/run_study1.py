#!/usr/bin/env python3
"""Run the four-method rating-study pipeline on the bundled demo corpus.

Emits 80 images (20 posts x 4 methods) plus the per-post payload records
under ./artifacts/study1 using the mock backends; fully deterministic
under the given seed.
"""

import sys
from pathlib import Path

from postimager.cli import main
from postimager.corpus import DEMO_CORPUS_PATH

if __name__ == "__main__":
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("artifacts/study1")
    sys.exit(
        main(
            [
                "study1",
                "--corpus", str(DEMO_CORPUS_PATH),
                "--out", str(out_dir),
                "--backend", "mock",
                "--seed", "7",
            ]
        )
    )
