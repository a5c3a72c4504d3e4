"""Command-line entry point: simulate, analyze, serve.

Exit codes: 0 success, 1 runtime/I-O failure, 2 flag errors (argparse).
Every simulate run writes a config snapshot and echoes its seed so the run
can be reproduced exactly; no command writes outside its --out directory.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path

from .analysis import (
    path_metrics_csv,
    path_metrics_rows,
    report_csv,
    report_json,
    report_rows,
)
from .config import MODE_NAMES, load_app_config, resolve_agent
from .errors import EmptyInput, HapticGuideError
from .records import MalformedRecord, read_records, record_from_run, write_records
from .trials import run_session

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="haptic-guide",
        description="Simulate, analyze, and serve vibrotactile guidance trials.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a batch of seeded synthetic trials")
    sim.add_argument("--mode", choices=sorted(MODE_NAMES), required=True)
    sim.add_argument("--trials", type=int, default=30)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--agent", default=None, help="agent preset name or JSON file")
    sim.add_argument("--config", default=None, help="INI config file")
    sim.add_argument("--out", required=True, help="output directory")

    ana = sub.add_parser("analyze", help="aggregate session logs into reports")
    ana.add_argument("--in", dest="inputs", nargs="+", required=True)
    ana.add_argument("--out", required=True)

    srv = sub.add_parser("serve", help="host live trials over websocket")
    srv.add_argument("--host", default=None)
    srv.add_argument("--port", type=int, default=None)
    srv.add_argument("--config", default=None)
    srv.add_argument("--out", default="runs")
    srv.add_argument("--seed", type=int, default=None)
    srv.add_argument("--no-log", action="store_true", help="do not persist trial records")
    srv.add_argument(
        "--reveal",
        action="store_true",
        help="experimenter overlay: include the endpoint in trial_started "
        "(refused unless --no-log)",
    )
    return parser


def cmd_simulate(args) -> int:
    app = load_app_config(args.config)
    mode = MODE_NAMES[args.mode]
    agent = resolve_agent(args.agent, mode, app)
    seed = args.seed if args.seed is not None else random.SystemRandom().randrange(2**32)
    if args.trials <= 0:
        print("error: --trials must be positive", file=sys.stderr)
        return 2

    cfg = app.trial_config(mode, seed)
    results = run_session(cfg, agent, args.trials)
    records = [
        record_from_run(cfg, agent, trace, outcome, session_seed=seed, trial_index=i)
        for i, (trace, outcome) in enumerate(results)
    ]

    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        session_path = out_dir / f"session-{args.mode}-{seed}.jsonl"
        write_records(session_path, records)
        snapshot = {
            "command": "simulate",
            "mode": args.mode,
            "trials": args.trials,
            "seed": seed,
            "agent": records[0].agent,
            "config": app.snapshot(),
        }
        snap_path = out_dir / f"run-{args.mode}-{seed}.json"
        snap_path.write_text(json.dumps(snapshot, sort_keys=True, indent=2) + "\n")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    n_ok = sum(1 for _, o in results if o.success)
    times = [o.completion_time for _, o in results if o.success]
    mean = sum(times) / len(times) if times else float("nan")
    print(
        f"mode={args.mode} trials={args.trials} seed={seed} "
        f"success={n_ok}/{args.trials} mean_time={mean:.2f}s -> {session_path}"
    )
    return 0


def cmd_analyze(args) -> int:
    records = []
    for name in args.inputs:
        try:
            records.extend(read_records(name))
        except FileNotFoundError:
            print(f"error: no such file: {name}", file=sys.stderr)
            return 1
        except MalformedRecord as exc:
            print(f"error: {name}: {exc}", file=sys.stderr)
            return 1
    if not records:
        print("error: no trial records", file=sys.stderr)
        return 1

    try:
        rows = report_rows(records)
        metric_rows = path_metrics_rows(records)
    except (EmptyInput, HapticGuideError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.csv").write_text(report_csv(rows))
        (out_dir / "report.json").write_text(report_json(rows))
        (out_dir / "path_metrics.csv").write_text(path_metrics_csv(metric_rows))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    print(f"analyzed {len(records)} trials -> {out_dir}/report.csv")
    return 0


def cmd_serve(args) -> int:
    from .service import ServiceConfig, run_service  # deferred: aiohttp import

    if args.reveal and not args.no_log:
        print("error: --reveal is refused for logged sessions; add --no-log", file=sys.stderr)
        return 2

    app = load_app_config(args.config)
    seed = args.seed if args.seed is not None else random.SystemRandom().randrange(2**32)
    service_cfg = ServiceConfig(
        host=args.host or app.service_host,
        port=args.port if args.port is not None else app.service_port,
        out_dir=None if args.no_log else Path(args.out),
        seed=seed,
        trial=app.trial,
        feedback_hz=app.feedback_hz,
        reveal=args.reveal,
    )
    try:
        run_service(service_cfg)
    except OSError as exc:
        print(f"error: cannot bind {service_cfg.host}:{service_cfg.port}: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "analyze":
            return cmd_analyze(args)
        return cmd_serve(args)
    except HapticGuideError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
