#!/usr/bin/env python3
"""
Command-line entry point for the N-Laplacian lab.
Equivalent to ``python -m src.cli``.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
