"""
Van Est verification CLI.
Entry point: loads a job config, runs the selected suites on worker threads,
writes a JSON (or CSV) report.
"""
import argparse
import logging
import sys

from cli.config import load_config
from cli.constants import EXIT_CONFIG, EXIT_OK, LOG_FORMAT
from cli.report import load_report
from cli.runner import run_suite, thread_count
from tensorcore.errors import ConfigError, ExprNameError, ExprSyntaxError

LOGGER = logging.getLogger("vanest")

# Suites each command runs; None keeps the selection from the config
COMMAND_SUITES = {
    "check": None,
    "cohomology": ["ce"],
    "vanest": ["vanest", "crosscheck"],
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vanest", description=__doc__.strip().splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("check", "run the suites selected in the config"),
                            ("cohomology", "Chevalley-Eilenberg checks and Betti numbers only"),
                            ("vanest", "Van Est chain, cup and cross-check suites only")):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("config", help="job config (JSON)")
        cmd.add_argument("-o", "--output", help="write the JSON report here instead of stdout")
        cmd.add_argument("--csv", help="also write a CSV summary here")
        cmd.add_argument("--stable", action="store_true", help="omit the timestamp and wall times")
    report = sub.add_parser("report", help="re-render a stored report")
    report.add_argument("report", help="report written by check/cohomology/vanest")
    report.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    LOGGER.info("wrote %s", path)


def _run(args) -> int:
    if args.command == "report":
        stored = load_report(args.report)
        _write(stored.to_json() if args.format == "json" else stored.to_csv(), None)
        return EXIT_OK

    cfg = load_config(args.config)
    if COMMAND_SUITES[args.command] is not None:
        cfg.suites = COMMAND_SUITES[args.command]
    report = run_suite(cfg, thread_count(), cfg.to_dict())
    _write(report.to_json(stable=args.stable), args.output)
    if args.csv:
        _write(report.to_csv(), args.csv)
    return report.exit_code()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format=LOG_FORMAT)
    try:
        return _run(args)
    except (ConfigError, ExprSyntaxError, ExprNameError) as e:
        sys.stderr.write(f"vanest: {type(e).__name__}: {e}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
