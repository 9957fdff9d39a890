"""Command-line front-end: a JSON job on stdin or in a file, a JSON report on stdout.

Exit codes: 0 PASS, 1 FAIL, 2 INCONCLUSIVE, 3 input error.
"""
import os
import sys
# Add the project root directory to Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import argparse
import logging
from pathlib import Path

from app import configure_logging
from src.api.codec import parse_input, serialize
from src.api.runner import run
from src.errors import ToolkitError
from src.report import INPUT_ERROR_EXIT

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Corona-problem and stable-rank toolkit for Dirichlet-type spaces.")
    parser.add_argument("job", nargs="?", help="job JSON file (default: read stdin)")
    parser.add_argument("--csv-out", type=Path, help="write the grid-export CSV here instead of into the report")
    return parser


def main(argv=None, stdin=None, stdout=None) -> int:
    args = build_parser().parse_args(argv)
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    configure_logging()

    try:
        text = Path(args.job).read_bytes() if args.job else stdin.read()
        job = parse_input(text)
        report = run(job)
    except OSError as e:
        logger.error("cannot read job: %s", e)
        stdout.write(serialize({"status": "error", "code": "IO_ERROR", "message": str(e)}) + "\n")
        return INPUT_ERROR_EXIT
    except ToolkitError as e:
        logger.error("%s: %s", e.code, e)
        stdout.write(serialize({"status": "error", **e.to_dict()}) + "\n")
        return INPUT_ERROR_EXIT

    if args.csv_out is not None and "csv" in report.artifacts:
        args.csv_out.write_text(report.artifacts.pop("csv"), encoding="utf-8", newline="")
        report.artifacts["csv_path"] = str(args.csv_out)
    stdout.write(serialize(report.to_dict()) + "\n")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
