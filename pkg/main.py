#!/usr/bin/env python3
"""
gridflow - Entry Point

Runs the command-line front end, e.g.

    uv run python main.py solve instance.json --output flow.json
"""

import sys
from pathlib import Path

# Add the project root to path
sys.path.insert(0, str(Path(__file__).parent))

from gridflow.cli import main

if __name__ == "__main__":
    sys.exit(main())
