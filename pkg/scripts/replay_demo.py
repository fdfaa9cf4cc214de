#!/usr/bin/env python3
"""Replay the demo session (three scripted measurements) on both engines and
print the per-iteration reasoner workload side by side."""

import sys
from pathlib import Path

from mbdiag import SessionConfig, load_dpi, run_session
from mbdiag.formula import parse_formula

ROOT = Path(__file__).resolve().parent.parent

SCRIPT = [("A -> C", False), ("A -> !B", False), ("A -> !C", True)]


def main() -> int:
    dpi = load_dpi((ROOT / "data" / "demo_dpi.json").read_text())
    script = [(parse_formula(text), positive) for text, positive in SCRIPT]
    results = {engine: run_session(SessionConfig(dpi=dpi, ld=5, engine=engine), script=script)
               for engine in ("dynamichs", "hstree")}

    header = f"{'':>4} {'measurement':<22} " + "".join(
        f"{engine + ' (h,m,e) gen/proc':<30}" for engine in results)
    print(header)
    for i in range(len(results["dynamichs"].iterations)):
        records = {engine: r.iterations[i] for engine, r in results.items()}
        any_record = records["dynamichs"]
        measurement = (f"{any_record.query} {any_record.outcome[:3]}"
                       if any_record.query else "(none)")
        cells = ""
        for engine in results:
            c = records[engine].counts
            cells += (f"({c['hardCalls']},{c['mediumCalls']},{c['easyCalls']}) "
                      f"{c['nodesGenerated']}/{c['nodesProcessed']}").ljust(30)
        print(f"{i + 1:>4} {measurement:<22} {cells}")

    for engine, result in results.items():
        t = result.totals
        print(f"{engine}: final {'+'.join(result.final)}; totals "
              f"hard={t['hardCalls']} medium={t['mediumCalls']} easy={t['easyCalls']} "
              f"generated={t['nodesGenerated']} processed={t['nodesProcessed']} "
              f"maxStored={t['maxNodesStored']} duplicates={t['duplicatesStored']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
