"""Entry point for running the approx-stable CLI as a standalone process."""

import logging
import sys

from approx_stable import cli_main

# Configure logging to look like print for this simple CLI
logging.basicConfig(level=logging.INFO, format="%(message)s")
logger = logging.getLogger(__name__)


def main() -> None:
    """Runs one approx-stable command and exits with its status."""
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
