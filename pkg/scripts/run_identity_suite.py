#!/usr/bin/env python3
"""Run the exact identity suite over the default primes and store reports.

Usage: python scripts/run_identity_suite.py [outdir]
"""

import pathlib
import sys

from cyclonorm.harness import RunConfig, cmd_identities, write_report

PRIMES = [5, 7, 11, 13, 37]


def main() -> int:
    outdir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "reports")
    outdir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for p in PRIMES:
        report = cmd_identities(RunConfig("identities", p=p))
        base = outdir / f"identities_p{p}"
        write_report(report, str(base))
        c = report.counts
        print(f"p = {p:3d}: pass={c['pass']:3d} fail={c['fail']} waived={c['waived']}"
              f"  -> {base}.json")
        worst = max(worst, c["fail"])
    return 1 if worst else 0


if __name__ == "__main__":
    sys.exit(main())
