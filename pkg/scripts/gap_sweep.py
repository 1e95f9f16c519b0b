"""Pressure versus gap width for a repulsive and an attractive constant stack.

Prints P * d^4, which is flat for dispersion-free media, next to the pressure
itself.  Usage: python scripts/gap_sweep.py [--points 7]
"""

import argparse

import numpy as np

from casimir_lifshitz.lifshitz import StackConfig, force_rational
from casimir_lifshitz.quadrature import QuadratureSpec

STACKS = {
    "repulsive (2.4525 | 2.25 | 2.0475)": (2.4525, 2.0475, 2.25),
    "attractive (3.0 | 1.0 | 3.0)": (3.0, 3.0, 1.0),
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=7)
    args = parser.parse_args()
    spec = QuadratureSpec(rel_tol=1e-7)
    gaps = np.logspace(-8, -5, args.points)
    for label, (e1, e2, e3) in STACKS.items():
        print(label)
        print(f"  {'d [m]':>10}  {'P [Pa]':>13}  {'P d^4 [N m^2]':>14}  sign")
        for d in gaps:
            r = force_rational(StackConfig.constant(e1, e2, e3, float(d)), spec)
            print(f"  {d:10.3e}  {r.pressure:13.5e}  {r.pressure * d**4:14.6e}  {r.sign_class.value}")


if __name__ == "__main__":
    main()
