"""Command-line front end.

    conifold {spectrum,weights,fredholm,stability,dim,topology,run} --config FILE
             [--out FILE] [--format table|json|csv] [--set /json/pointer=VALUE ...]

Exit status: 0 on success, 2 when a computation is refused (exceptional
weight, incomplete spectrum), 1 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import COMPUTATIONS, ConfigError, load_config, run_job, set_pointer
from .errors import ConifoldError, Refusal
from .report import emit_report, to_jsonable

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conifold", description="Harmonic analysis and deformation counts on conifolds.")
    parser.add_argument("command", choices=list(COMPUTATIONS) + ["run"], help="computation to run; 'run' uses the config's list")
    parser.add_argument("--config", required=True, help="JSON job file")
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=["table", "json", "csv"], help="output format (default: config value or table)")
    parser.add_argument(
        "--set", action="append", default=[], metavar="POINTER=VALUE",
        help="override a config field, e.g. --set /ends/0/rate=1.5 (VALUE is parsed as JSON if possible)",
    )
    return parser


def _parse_override(text: str) -> tuple[str, object]:
    if "=" not in text:
        raise ConifoldError(f"override {text!r} is not of the form /pointer=value")
    pointer, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return pointer, value


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg, base = load_config(args.config)
        for item in args.set:
            cfg = set_pointer(cfg, *_parse_override(item))
        compute = None if args.command == "run" else [args.command]
        bundle = run_job(cfg, base, compute)
        fmt = args.format or cfg.get("format", "table")
        text = emit_report(bundle, fmt)
    except ConfigError as exc:
        for pointer, message in exc.diagnostics:
            print(f"config error at {pointer}: {message}", file=sys.stderr)
        return 1
    except Refusal as exc:
        print(f"refused: {exc}", file=sys.stderr)
        print(json.dumps(to_jsonable(exc.details()), sort_keys=True), file=sys.stderr)
        return 2
    except ConifoldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
