#!/usr/bin/env python3
"""Run the full verification suite and write the canonical JSON report.

Equivalent to `bochnerkit all`, kept as a script entry for experiment
workflows:

    python scripts/run_all_scenarios.py --seed 7 --json report.json
"""

import sys

from bochnerkit.cli import cli_dispatch

if __name__ == "__main__":
    sys.exit(cli_dispatch(["all", *sys.argv[1:]]))
