#!/usr/bin/env python3
"""End-to-end pipeline demos.

A true solution at p = 3 exercises the characteristic-ideal and canonical
generator checks; a pseudo-solution at p = 5 drives the full semilocal
chain (series, digits, perturbation, twist selection, bound clash), with
size waivers printed for every stage the headline inequalities gate.
"""

import sys

from cyclonorm.harness import RunConfig, cmd_pipeline


def main() -> int:
    failures = 0
    for cfg in [
        RunConfig("pipeline", p=3, x=19, y=18),
        RunConfig("pipeline", p=3, x=2, y=1),
        RunConfig("pipeline", p=5, x=3, y=22, precision=6),
    ]:
        print(f"--- p={cfg.p}, x={cfg.x}, y={cfg.y} ---")
        report = cmd_pipeline(cfg)
        for rec in report.records:
            mark = {"pass": "ok ", "fail": "FAIL", "waived": "wvd"}[rec.status]
            note = f"  [{rec.note}]" if rec.note else ""
            print(f"  {mark} {rec.name}{note}")
        failures += report.counts["fail"]
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
