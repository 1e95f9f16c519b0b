"""Leading-order perturbative pressure against the full integral as the contrast grows.

For a symmetric contrast D about eps3 the relative deviation should scale like
D^2.
Usage: python scripts/perturbative_agreement.py [--eps3 2.25] [--gap 1e-6]
"""

import argparse

from casimir_lifshitz.lifshitz import force_rational
from casimir_lifshitz.perturbation import PerturbativeInput, force_perturbative, ratio_to_casimir
from casimir_lifshitz.quadrature import QuadratureSpec


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--eps3", type=float, default=2.25)
    parser.add_argument("--gap", type=float, default=1e-6)
    args = parser.parse_args()
    spec = QuadratureSpec(rel_tol=1e-10)
    print(f"{'D':>6}  {'leading [Pa]':>13}  {'full [Pa]':>13}  {'dev/D^2':>8}  {'P/P_ideal (leading)':>20}")
    for delta in (0.01, 0.02, 0.05, 0.1, 0.2, 0.4):
        inp = PerturbativeInput(delta, args.eps3, args.gap)
        lead = force_perturbative(inp).pressure
        full = force_rational(inp.to_stack(), spec).pressure
        dev = abs(full / lead - 1.0) / delta**2
        ratio = ratio_to_casimir(delta, args.eps3)
        print(f"{delta:6.2f}  {lead:13.5e}  {full:13.5e}  {dev:8.4f}  {ratio:20.6e}")


if __name__ == "__main__":
    main()
