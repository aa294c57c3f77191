#!/usr/bin/env python3
"""Boot the HTTP service with mock backends for local exploration.

Data lands under ./postimager-data; the web UI in frontend/ talks to this.
"""

import sys

from postimager.config import load_config
from postimager.service import run

if __name__ == "__main__":
    config = load_config(sys.argv[1] if len(sys.argv) > 1 else None)
    print(f"serving on http://127.0.0.1:{config.port} (data dir: {config.data_dir})")
    run(config)
