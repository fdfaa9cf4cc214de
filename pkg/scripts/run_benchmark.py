#!/usr/bin/env python3
"""Run the paired engine benchmark on the default suite.

Usage: python scripts/run_benchmark.py [suite.json] [out_dir]
Defaults: data/bench_suite.json -> out/bench/
"""

import json
import sys
import time
from pathlib import Path

from mbdiag.bench import load_suite, run_benchmark, write_report

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    suite_path = Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "data" / "bench_suite.json"
    out_dir = Path(sys.argv[2]) if len(sys.argv) > 2 else ROOT / "out" / "bench"
    print(f"loading suite {suite_path} (random systems are generated on the fly) ...")
    suite = load_suite(suite_path.read_text(), base_dir=suite_path.parent)
    print(f"{len(suite.dpis)} systems x {len(suite.ld_values)} ld values x "
          f"{len(suite.heuristics)} heuristics x {suite.targets_per_scenario} targets")
    started = time.perf_counter()
    report = run_benchmark(suite)
    elapsed = time.perf_counter() - started
    write_report(report, out_dir)
    print(json.dumps(report.aggregates, indent=2))
    print(f"{len(report.rows)} rows ({report.aggregates['pairs']} pairs) in {elapsed:.1f}s "
          f"-> {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
