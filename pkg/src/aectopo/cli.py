"""Command line front door: ``aectopo <command> --config <path> [--out dir] [--budget-<name> value]``.

Exit status is 0 when every executed check passes, 1 on a verification
failure and 2 on a usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import fields, replace
from pathlib import Path

from .config import COMMANDS, Budgets, ConfigError, RunConfig, parse_config
from .errors import BudgetExceeded
from .pipeline import PIPELINE, Report, run_all, run_command

OUT_ENV = "AECTOPO_OUT"
DEFAULT_OUT = "aectopo-reports"
EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("aectopo")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aectopo", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="TOML run configuration")
    p.add_argument("--out", default=None, help=f"output root (default ${OUT_ENV} or ./{DEFAULT_OUT})")
    p.add_argument("--format", choices=("both", "json", "text"), default=None,
                   help="report format (overrides the config)")
    p.add_argument("-v", "--verbose", action="store_true", help="log timings to stderr")
    for f in fields(Budgets):
        p.add_argument(f"--budget-{f.name.replace('_', '-')}", dest=f"budget_{f.name}", type=int, default=None,
                       metavar="N")
    return p


def write_report(rep: Report, directory: Path, fmt: str):
    directory.mkdir(parents=True, exist_ok=True)
    if fmt in ("both", "json"):
        (directory / "report.json").write_text(json.dumps(rep.to_dict(), sort_keys=True, indent=1) + "\n")
    if fmt in ("both", "text"):
        (directory / "report.txt").write_text(rep.to_text())
    for name, content in sorted(rep.artifacts.items()):
        (directory / name).write_text(content)


def run_dir(root: Path, command: str, cfg: RunConfig) -> Path:
    return root / f"{command}-{cfg.digest()[:12]}"


def execute(command: str, cfg: RunConfig, root: Path) -> tuple[int, Path]:
    target = run_dir(root, command, cfg)
    if command == "all":
        reports = run_all(cfg)
        for rep in reports:
            write_report(rep, target / rep.command, cfg.report_format)
        summary = Report("all", reports[0].header)
        ran = {r.command for r in reports}
        for rep in reports:
            summary.check(rep.command, rep.passed, len(rep.checks),
                          witness=[f["check"] for f in rep.failures] or None)
        for name in PIPELINE:
            if name not in ran:
                summary.check(name, False, 0, "skipped after validate-aec failed", "skipped")
        write_report(summary, target, cfg.report_format)
        passed = summary.passed
    else:
        rep = run_command(command, cfg)
        write_report(rep, target, cfg.report_format)
        passed = rep.passed
    return (EXIT_PASS if passed else EXIT_FAIL), target


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_PASS
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    overrides = {k[len("budget_"):]: v for k, v in vars(args).items() if k.startswith("budget_") and v is not None}
    try:
        cfg = parse_config(args.config)
        if overrides:
            cfg = cfg.with_budgets(overrides)
        if args.format:
            cfg = replace(cfg, report_format=args.format)
    except ConfigError as e:
        print(f"aectopo: config error: {e}", file=sys.stderr)
        if e.keys:
            print(json.dumps({"error": "config", "keys": list(e.keys), "message": str(e)}), file=sys.stderr)
        return EXIT_USAGE
    root = Path(args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT)
    try:
        code, target = execute(args.command, cfg, root)
    except BudgetExceeded as e:
        print(f"aectopo: budget exceeded: {e}", file=sys.stderr)
        return EXIT_USAGE
    print(f"{args.command}: {'PASS' if code == EXIT_PASS else 'FAIL'} -> {target}")
    return code


if __name__ == "__main__":
    sys.exit(main())
