"""Command-line scenario runner.

Exit status: 0 on success, 1 for configuration or I/O errors, 2 when a
numerical self-check trips.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import ConfigError, ConsistencyError
from .scenario import (
    FORMATS,
    PRESETS,
    all_transitions,
    emit,
    load_configs,
    load_preset,
    run_scenario,
    write_output,
)

log = logging.getLogger("qincompat")


def _panel_path(out: Path, name: str) -> Path:
    return out.with_name(f"{out.stem}-{name}{out.suffix}")


def _run_panels(configs, out, fmt) -> None:
    multi = len(configs) > 1
    chunks = []
    for cfg in configs:
        log.info("running %s (%s, %d steps)", cfg.name, cfg.model, cfg.n_steps)
        series = run_scenario(cfg)
        data = emit(series, all_transitions(series), fmt or cfg.output_format)
        if out is None:
            chunks.append(data)
        else:
            path = _panel_path(Path(out), cfg.name) if multi else Path(out)
            write_output(data, path)
            log.info("wrote %s", path)
    if chunks:
        sys.stdout.buffer.write(b"\n".join(chunks))
        sys.stdout.flush()


def cmd_run(args) -> None:
    _run_panels(load_configs(args.config), args.out, args.format)


def cmd_preset(args) -> None:
    _run_panels(load_preset(args.name), args.out, args.format)


def cmd_transitions(args) -> None:
    lines = ["scenario,pair,time,kind"]
    for cfg in load_configs(args.config):
        for e in all_transitions(run_scenario(cfg)):
            lines.append(f"{cfg.name},{e.pair},{e.time:.12g},{e.kind}")
    sys.stdout.write("\n".join(lines) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qincompat",
        description="Incompatibility and entanglement dynamics of qubit measurements under open-system noise.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the scenario(s) in a JSON config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="output file; multi-panel configs write <stem>-<name><suffix>")
    p.add_argument("--format", choices=FORMATS, help="overrides output_format from the config")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("preset", help="run a bundled figure preset")
    p.add_argument("name", choices=PRESETS)
    p.add_argument("--out")
    p.add_argument("--format", choices=FORMATS)
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("transitions", help="print sudden-death and revival times only")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_transitions)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except ConsistencyError as e:
        print(f"numerical consistency check failed: {e}", file=sys.stderr)
        return 2
    except (ConfigError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
