#!/usr/bin/env python3
"""Small-solution scans: the p = 3 family has solutions, p >= 5 has none.

Usage: python scripts/run_search_demo.py [bound]
"""

import sys

from cyclonorm.harness import RunConfig, cmd_search


def main() -> int:
    bound = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    for p, q in [(3, None), (5, None), (7, None), (5, 7)]:
        cfg = RunConfig("search", p=p, q=q, bound=bound if p != 3 else min(bound, 50))
        report = cmd_search(cfg)
        hits = next(r for r in report.records if r.name == "search-hits")
        label = f"p={p}" + (f", z^{q}" if q else "")
        print(f"{label:12s} bound {cfg.bound:4d}: {hits.outputs['count']} hits")
        for h in hits.outputs["hits"]:
            print(f"    (x, y, z, e) = ({h['x']}, {h['y']}, {h['z']}, {h['e']})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
