"""Command-line harness: stream generation, verification, replay, benchmarks."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .core import StreamError, format_stream, parse_stream
from .gen import KINDS, generate_stream
from .pipeline import replay


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational {text!r}: {exc}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def strip_timing(report: dict) -> dict:
    """Report minus wall-time fields; used by determinism checks."""
    return {
        k: v
        for k, v in report.items()
        if k not in ("wall_time_s", "wall_times_s", "event_time_percentiles")
    }


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dynmatch", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a deterministic update stream")
    g.add_argument("--kind", choices=KINDS, default="random")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--events", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--density", type=float, default=4.0)
    g.add_argument("--window", type=int, default=None)
    g.add_argument("--max-degree", type=int, default=None)
    g.add_argument("--out", default="-")

    v = sub.add_parser("verify", help="parse and validate a stream file")
    v.add_argument("stream")

    def add_run_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--stream", required=True)
        p.add_argument("--algo", choices=("general", "kernel"), default="general")
        p.add_argument("--eps", type=_frac, default=Fraction(1, 3))
        p.add_argument("--gamma", type=_frac, default=None)
        p.add_argument("--delta", type=_frac, default=None)
        p.add_argument("--skel-target", type=_frac, default=None)
        p.add_argument("--d", type=int, default=None)
        p.add_argument("--eps-k", type=_frac, default=Fraction(1, 2000))
        p.add_argument("--delta-k", type=_frac, default=Fraction(1, 20))
        p.add_argument("--eps-dm", type=_frac, default=None)
        p.add_argument("--audit-every", type=int, default=100)
        p.add_argument("--oracle-every", type=int, default=25)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--stats-out", default="-")

    r = sub.add_parser("run", help="replay a stream with audits and oracle checks")
    add_run_flags(r)

    b = sub.add_parser("bench", help="replay without audits/oracles, report counters")
    add_run_flags(b)
    b.add_argument("--repeats", type=int, default=1)
    return ap


def _replay_args(args: argparse.Namespace) -> dict:
    return dict(
        algo=args.algo,
        eps=args.eps,
        gamma=args.gamma,
        delta=args.delta,
        skel_target=args.skel_target,
        d=args.d,
        eps_k=args.eps_k,
        delta_k=args.delta_k,
        eps_dm=args.eps_dm,
        audit_every=args.audit_every,
        oracle_every=args.oracle_every,
    )


def cmd_gen(args: argparse.Namespace) -> int:
    stream = generate_stream(
        args.kind,
        args.n,
        args.events,
        args.seed,
        density=args.density,
        window=args.window,
        max_degree=args.max_degree,
    )
    _write(args.out, format_stream(stream))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        text = Path(args.stream).read_text(encoding="utf-8")
        parse_stream(text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except StreamError as exc:
        print(f"invalid stream: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    try:
        stream = parse_stream(Path(args.stream).read_text(encoding="utf-8"))
    except (OSError, StreamError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = replay(stream, **_replay_args(args))
    report["seed"] = args.seed
    _write(args.stats_out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0 if report["audit_failures"] == 0 else 2


def cmd_bench(args: argparse.Namespace) -> int:
    try:
        stream = parse_stream(Path(args.stream).read_text(encoding="utf-8"))
    except (OSError, StreamError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    kwargs = _replay_args(args)
    runs = []
    for _ in range(max(1, args.repeats)):
        runs.append(
            replay(stream, with_audits=False, with_oracle=False, timings=True, **kwargs)
        )
    report = dict(runs[0])
    report["repeats"] = len(runs)
    report["wall_times_s"] = [r["wall_time_s"] for r in runs]
    report["seed"] = args.seed
    _write(args.stats_out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 0 if report["audit_failures"] == 0 else 2


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "gen": cmd_gen,
        "verify": cmd_verify,
        "run": cmd_run,
        "bench": cmd_bench,
    }
    try:
        return handlers[args.cmd](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
