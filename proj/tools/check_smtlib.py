#!/usr/bin/env python3
"""Cross-check exported SMT-LIB scripts with an external solver.

Usage: check_smtlib.py <solver-binary> <dir-with-.smt2-files>

Runs each script and prints the solver verdict next to the file name. A
solver answering "unsat" agrees with the kernel's Valid verdict. Note the
direction: stock SMT solvers use open domains, so "sat" does not by itself
contradict a Valid verdict whose proof depends on domain closure (see
docs/fol-grammar.md).
"""

import pathlib
import subprocess
import sys


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    solver, directory = sys.argv[1], pathlib.Path(sys.argv[2])
    scripts = sorted(directory.glob("*.smt2"))
    if not scripts:
        print(f"no .smt2 files under {directory}", file=sys.stderr)
        return 2
    for script in scripts:
        out = subprocess.run([solver, str(script)], capture_output=True, text=True, timeout=60)
        verdict = (out.stdout.strip().splitlines() or ["?"])[-1]
        print(f"{verdict:>6}  {script.name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
