#!/usr/bin/env python3
"""Sweep the Fourier-mode cohomology of a degenerate family member and
assemble the global answer; prints one table row per mode.

Usage: python scripts/necklace_cohomology.py [c] [modes] [truncation]
"""
import sys
from fractions import Fraction

from bigbracket.necklace import global_assembly, mode_cohomology


def main():
    c = Fraction(sys.argv[1]) if len(sys.argv) > 1 else Fraction(0)
    modes = int(sys.argv[2]) if len(sys.argv) > 2 else 5
    truncate = int(sys.argv[3]) if len(sys.argv) > 3 else 12
    print(f"family parameter c = {c}, truncation N = {truncate}")
    local = None
    if abs(c) < 1:
        print(f"{'mode':>6} {'dims':>12}  generators")
        for n in range(modes + 1):
            rep = mode_cohomology(c, n, truncate)
            if n == 0:
                local = rep
            gens = "; ".join(", ".join(g) for g in rep.generators if g)
            print(f"{n:>6} {str(rep.dims):>12}  {gens}")
    result = global_assembly(c, local)
    print(f"global dims: {result.dims}")
    gens = "; ".join(", ".join(g) for g in result.generators if g)
    print(f"global generators: {gens}")
    for key, value in result.provenance.items():
        print(f"  provenance[{key}] = {value}")


if __name__ == "__main__":
    main()
