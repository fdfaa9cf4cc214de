"""Command line entry points.

Subcommands: ``run`` (one sequential diagnosis session, simulated or
interactive), ``oracle`` (brute-force minimal diagnoses/conflicts of a DPI
file), ``bench`` (paired engine benchmark), ``serve`` (HTTP session service).

Exit codes: 0 success, 2 usage error, 3 input error, 4 engine error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import EngineMismatchError, load_suite, run_benchmark, write_report
from .dpi import (Dpi, DpiFormatError, brute_force_minimal_conflicts,
                  brute_force_minimal_diagnoses, ids_of, is_diagnosis, load_dpi)
from .query import HEURISTICS
from .session import (AWAITING, ENGINES, FINAL, InteractiveSession, SessionConfig,
                      SessionError, TargetDiagnosisOracle, run_session)

USAGE_ERROR = 2
INPUT_ERROR = 3
ENGINE_ERROR = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mbdiag",
                                     description="Sequential model-based diagnosis toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one sequential diagnosis session")
    run.add_argument("--dpi", required=True, help="DPI JSON file")
    run.add_argument("--engine", choices=ENGINES, default="dynamichs")
    run.add_argument("--ld", type=int, default=5, help="leading diagnoses per iteration")
    run.add_argument("--heuristic", choices=HEURISTICS, default="ent")
    driver = run.add_mutually_exclusive_group(required=True)
    driver.add_argument("--target", help="comma-separated component ids of the simulated "
                                         "actual diagnosis")
    driver.add_argument("--interactive", action="store_true",
                        help="answer the queries yourself on the terminal")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--max-iterations", type=int, default=100)
    run.add_argument("--report", help="write the full session report JSON here")

    oracle = sub.add_parser("oracle", help="print brute-force minimal diagnoses and conflicts")
    oracle.add_argument("--dpi", required=True, help="DPI JSON file")

    bench = sub.add_parser("bench", help="paired engine benchmark over a suite")
    bench.add_argument("--suite", required=True, help="suite JSON file")
    bench.add_argument("--out", required=True, help="output directory for rows.csv etc.")

    serve = sub.add_parser("serve", help="serve the diagnosis session API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--static", help="directory with the web client to serve at /")
    return parser


def _load_dpi_file(path: str) -> Dpi:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DpiFormatError(f"cannot read {path}: {exc}") from exc
    return load_dpi(text)


def _parse_target(dpi: Dpi, spec: str) -> list[int]:
    indices = []
    for cid in spec.split(","):
        cid = cid.strip()
        try:
            indices.append(dpi.index_of(cid))
        except KeyError:
            raise DpiFormatError(f"unknown component id {cid!r} in --target") from None
    if not is_diagnosis(indices, dpi):
        raise DpiFormatError(f"--target {spec} is not a diagnosis of this system")
    for i in indices:
        if is_diagnosis(set(indices) - {i}, dpi):
            raise DpiFormatError(f"--target {spec} is not minimal "
                                 f"(drop {dpi.id_of(i)} and it still passes)")
    return indices


def _print_iteration(index: int, leading: list[list[str]], weights: list[float]) -> None:
    print(f"iteration {index}: {len(leading)} leading diagnoses")
    for ids, weight in zip(leading, weights):
        print(f"  {'+'.join(ids)}  (weight {weight:.3f})")


def _finish(session_result, report_path: str | None) -> int:
    if report_path:
        Path(report_path).write_text(json.dumps(session_result.to_json(), indent=2))
    if session_result.status == FINAL:
        print(f"final diagnosis: {'+'.join(session_result.final)}")
        return 0
    print(f"session ended without a single diagnosis ({session_result.status}); surviving:")
    for ids in session_result.surviving:
        print(f"  {'+'.join(ids)}")
    return 0


def _cmd_run(args) -> int:
    dpi = _load_dpi_file(args.dpi)
    config = SessionConfig(dpi=dpi, ld=args.ld, engine=args.engine, heuristic=args.heuristic,
                           max_iterations=args.max_iterations, seed=args.seed)
    if args.target:
        target = _parse_target(dpi, args.target)
        result = run_session(config, oracle=TargetDiagnosisOracle(target))
        for record in result.iterations:
            _print_iteration(record.index, record.leading, record.weights)
            if record.query is not None:
                print(f"  query: {record.query}  ->  {record.outcome}")
        return _finish(result, args.report)

    session = InteractiveSession(config)
    record = session.records[-1]
    _print_iteration(record.index, record.leading, record.weights)
    while session.status == AWAITING:
        try:
            reply = input(f"Must it be true that {session.current_query.text}? [y/n/stop] ")
        except (EOFError, KeyboardInterrupt):
            print()
            break
        reply = reply.strip().lower()
        if reply in ("y", "yes"):
            session.answer(True)
        elif reply in ("n", "no"):
            session.answer(False)
        elif reply in ("s", "stop", "q", "quit"):
            break
        else:
            print("please answer y, n or stop")
            continue
        record = session.records[-1]
        _print_iteration(record.index, record.leading, record.weights)
    return _finish(session.result(), args.report)


def _cmd_oracle(args) -> int:
    dpi = _load_dpi_file(args.dpi)
    diagnoses = sorted(brute_force_minimal_diagnoses(dpi), key=lambda s: (len(s), sorted(s)))
    conflicts = sorted(brute_force_minimal_conflicts(dpi), key=lambda s: (len(s), sorted(s)))
    print(json.dumps({
        "diagnoses": [ids_of(dpi, d) for d in diagnoses],
        "conflicts": [ids_of(dpi, c) for c in conflicts],
    }, indent=2))
    return 0


def _cmd_bench(args) -> int:
    try:
        text = Path(args.suite).read_text()
    except OSError as exc:
        raise DpiFormatError(f"cannot read {args.suite}: {exc}") from exc
    try:
        suite = load_suite(text, base_dir=Path(args.suite).parent)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise DpiFormatError(f"malformed suite file: {exc}") from exc
    report = run_benchmark(suite)
    write_report(report, args.out)
    print(json.dumps(report.aggregates, indent=2))
    print(f"wrote {len(report.rows)} rows to {Path(args.out) / 'rows.csv'}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {"run": _cmd_run, "oracle": _cmd_oracle, "bench": _cmd_bench,
                "serve": _cmd_serve}
    try:
        return handlers[args.command](args)
    except DpiFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (SessionError, EngineMismatchError, AssertionError, RuntimeError) as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return ENGINE_ERROR


if __name__ == "__main__":
    sys.exit(main())
