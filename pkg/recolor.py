"""
Command-line entry point: python recolor.py <command> ...
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from cli import run_command


if __name__ == "__main__":
    sys.exit(run_command(sys.argv[1:]))
