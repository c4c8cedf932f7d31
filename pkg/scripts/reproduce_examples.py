"""Print every worked example through the CLI demo reports."""

import sys

from multilateral.cli import DEMOS, main

if __name__ == "__main__":
    status = 0
    for name in DEMOS:
        print(f"== {name} ==")
        status = max(status, main(["demo", name]))
        print()
    sys.exit(status)
