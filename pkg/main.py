#!/usr/bin/env python3
"""
Swahili news text-graph classifier - Main entry point

Usage:
    python main.py <command> [options]
    python main.py --help
"""
import sys
from pathlib import Path

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent))

from src.cli.app import run


def main():
    """Main entry point for the command-line pipeline."""
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        print("\n👋 Interrupted", file=sys.stderr)
        sys.exit(130)


if __name__ == "__main__":
    main()
