#!/usr/bin/env python3
"""Topic-count selection demo: clean the bundled corpus, fit one model per
candidate k, and report per-k perplexity plus the best model's top words.

The bundled corpus is tiny, so the default range stays small; pass
--kmax 20 --sweeps 100 to mirror a full-scale run on a larger corpus.
"""

import sys

from postimager.cli import main
from postimager.corpus import DEMO_CORPUS_PATH

if __name__ == "__main__":
    argv = [
        "lda",
        "--corpus", str(DEMO_CORPUS_PATH),
        "--kmin", "2",
        "--kmax", "6",
        "--sweeps", "50",
        "--seed", "0",
    ]
    sys.exit(main(argv + sys.argv[1:]))
