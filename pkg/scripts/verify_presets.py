#!/usr/bin/env python3
"""Run every shipped preset through its natural verification gates.

Exit status is nonzero when any gate fails, mirroring the CLI.
"""
import sys

from bigbracket.cli import main as cli

GATES = {
    "tangent-R1": ["verify-algebroid"],
    "tangent-R2": ["verify-algebroid"],
    "tangent-R3": ["verify-algebroid"],
    "brst-so2-on-R2": ["verify-algebroid", "double"],
    "su2-bialgebra": ["verify-bialgebroid", "double", "courant-verify", "shla-check"],
    "poisson-R2": ["verify-bialgebroid", "double", "courant-verify"],
    "weil-su2": ["verify-bialgebroid", "double"],
    "standard-R1": ["verify-bialgebroid", "courant-verify", "shla-check"],
    "standard-R2": ["verify-bialgebroid", "courant-verify"],
    "standard-R3": ["verify-bialgebroid", "courant-verify"],
    "exact-twist-R3": ["verify-proto", "twist"],
}


def main():
    worst = 0
    for preset, commands in GATES.items():
        for command in commands:
            print(f"== {command} --preset {preset}")
            code = cli([command, "--preset", preset])
            worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
