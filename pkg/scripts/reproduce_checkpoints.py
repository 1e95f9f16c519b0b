"""Run the checkpoint suite and print the comparison table.

Usage: python scripts/reproduce_checkpoints.py [--tol 1e-6]
"""

import argparse
import sys

from casimir_lifshitz.quadrature import QuadratureSpec
from casimir_lifshitz.validation import format_table, run_checks


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--tol", type=float, default=1e-6, help="relative quadrature tolerance")
    args = parser.parse_args()
    checks = run_checks(QuadratureSpec(rel_tol=args.tol))
    print(format_table(checks))
    return 0 if all(c.passed for c in checks) else 1


if __name__ == "__main__":
    sys.exit(main())
