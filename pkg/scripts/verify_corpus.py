#!/usr/bin/env python3
"""Run the whole CLI surface over the shipped corpus and check exit codes.

Prints one line per invocation and exits nonzero when any run disagrees
with the expected code.  Negative fixtures are expected to exit 1; that
counts as agreement.
"""

import subprocess
import sys
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

RUNS = [
    (["validate", "fix_a.json"], 0),
    (["validate", "fix_b.json"], 0),
    (["validate", "fix_b2.json"], 0),
    (["validate", "fix_b_pair.json"], 0),
    (["validate", "fix_c.json"], 0),
    (["validate", "cech_fixb.json"], 0),
    (["validate", "cech_fixb_ladder.json"], 0),
    (["validate", "nonadapted.json"], 0),
    (["validate", "perturbed_ladder.json"], 0),
    (["validate", "jacobi_violation.json"], 1),
    (["mc", "fix_b.json", "--element", "x"], 0),
    (["mc", "fix_b.json", "--element", "2x"], 1),
    (["twist", "fix_b.json", "--element", "x"], 0),
    (["cohomology", "fix_a.json"], 0),
    (["twist-identities", "fix_b_pair.json", "--structure", "fix_b",
      "--element", "x", "--second-element", "2x"], 0),
    (["module-consistency", "fix_b_pair.json", "--element", "x"], 0),
    (["resolution-check", "fix_c.json"], 0),
    (["resolution-check", "cech_fixb.json"], 0),
    (["resolution-check", "nonadapted.json"], 0),
    (["adapted-mc", "fix_c.json", "--element", "zero"], 0),
    (["adapted-mc", "cech_fixb.json", "--element", "x"], 0),
    (["adapted-mc", "nonadapted.json", "--element", "x"], 1),
    (["prop-key", "cech_fixb_ladder.json", "--mc", "x"], 0),
    (["prop-key", "perturbed_ladder.json", "--element", "zero"], 1),
]


def main():
    bad = 0
    for args, expected in RUNS:
        argv = [sys.executable, "-m", "linfty.cli", args[0],
                str(FIXTURES / args[1])] + args[2:]
        proc = subprocess.run(argv, capture_output=True, text=True)
        agree = proc.returncode == expected
        mark = "ok " if agree else "BAD"
        print(f"{mark} exit={proc.returncode} expected={expected}  "
              + " ".join(args))
        if not agree:
            bad += 1
            sys.stdout.write(proc.stdout)
            sys.stderr.write(proc.stderr)
    print(f"{len(RUNS) - bad}/{len(RUNS)} invocations agree")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
