"""Main entry point for the fraclayer command."""

import sys

from src.cli.app import main as run_cli


def main():
    """Run the fraclayer command line and exit with its status."""
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
