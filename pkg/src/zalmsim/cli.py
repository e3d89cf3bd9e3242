"""Command-line driver: ``zalmsim run`` and ``zalmsim sweep``.

Exit codes: 0 success, 1 usage or config error, 2 numerical degeneracy, 3 I/O.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .errors import DegenerateInputError, ZalmError
from .pipeline import (MEMORY_MODES, PRESETS, SWEEPABLE, ConfigError, emit, load_config, preset,
                       run, sweep, to_csv, validate)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _diagnose("usage", message)
        sys.exit(EXIT_USAGE)


def _diagnose(kind: str, message: str) -> None:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)


def parse_channels(text: str):
    """``"a..b"`` (inclusive), ``"a,b,c"``, ``"all"`` or ``""`` (none)."""
    text = text.strip()
    if text == "all":
        return None
    if not text:
        return ()
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split(".."))
            return tuple(range(lo, hi + 1))
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise ConfigError(f"bad channel list {text!r}") from None


def parse_values(text: str) -> list:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            out.append(int(tok) if tok.lstrip("+-").isdigit() else float(tok))
        except ValueError:
            raise ConfigError(f"bad sweep value {tok!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zalmsim", description="Channelized ZALM source, BSM and memory-loading tables.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--preset", choices=sorted(PRESETS))
        src.add_argument("--config", help="TOML config file")
        sp.add_argument("--channels", help="a..b, a,b,c, all, or empty")
        sp.add_argument("--memory", choices=MEMORY_MODES)
        sp.add_argument("--guard-stride", type=int)
        sp.add_argument("--points", type=int, help="quadrature points per channel")
        sp.add_argument("--out", help="output file or directory (default: stdout for csv)")
        sp.add_argument("--format", default="csv", help="csv or plotdata")
        sp.add_argument("--verify-grid", action="store_true",
                        help="rerun at twice the resolution and report the drift")
        sp.add_argument("--workers", type=int)

    common(sub.add_parser("run", help="per-channel report"))
    sw = sub.add_parser("sweep", help="run over a list of values of one parameter")
    common(sw)
    sw.add_argument("--param", required=True, help=f"one of {', '.join(sorted(SWEEPABLE))}")
    sw.add_argument("--values", required=True, help="comma-separated values")
    return p


def config_from_args(args):
    cfg = preset(args.preset) if args.preset else load_config(args.config)
    out = cfg.outputs
    if args.channels is not None:
        out = replace(out, channels=parse_channels(args.channels))
    if args.guard_stride is not None:
        out = replace(out, guard_stride=args.guard_stride)
    if args.verify_grid:
        out = replace(out, verify_grid=True)
    if args.workers is not None:
        out = replace(out, workers=args.workers)
    cfg = replace(cfg, outputs=out)
    if args.memory:
        cfg = replace(cfg, memory=replace(cfg.memory, mode=args.memory))
    if args.points:
        cfg = replace(cfg, grid=replace(cfg.grid, points_per_channel=args.points))
    validate(cfg)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.format not in ("csv", "plotdata"):
            raise ConfigError(f"unknown format {args.format!r}; use csv or plotdata")
        if args.format == "plotdata" and not args.out:
            raise ConfigError("plotdata output needs --out <dir>")
        cfg = config_from_args(args)
        if args.command == "sweep":
            table = sweep(cfg, args.param, parse_values(args.values))
        else:
            table = run(cfg)
        if args.out:
            emit(table, args.format, args.out)
        else:
            sys.stdout.write(to_csv(table))
        warn = [r["n"] for r in table.rows if r.get("grid_warning")]
        if warn:
            _diagnose("grid-drift", f"resolution drift above tolerance for channels {warn}")
    except ConfigError as exc:
        _diagnose("config", str(exc))
        return EXIT_USAGE
    except DegenerateInputError as exc:
        _diagnose("degenerate", str(exc))
        return EXIT_NUMERIC
    except OSError as exc:
        _diagnose("io", str(exc))
        return EXIT_IO
    except ZalmError as exc:
        _diagnose("numeric", str(exc))
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
