"""Command-line entry point.

Exit codes: 0 when every verdict passes, 2 when a verdict fails, 1 on input,
usage or construction errors.
"""

import argparse
import sys

from .errors import BCLError
from .io import dumps, parse_matrix_file, pointset_to_csv
from .pipeline import COMMANDS, JobConfig, run_pipeline
from .random_pairs import random_commuting_pair


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="bclfactor", description="Dilate and factor a commuting pair of contractions.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", help="JSON pair file with keys T1 and T2")
    p.add_argument("--poly", action="append", default=[], help="polynomial in z1, z2 (repeatable)")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--purity-margin", type=float, default=1e-6)
    p.add_argument("--trunc-tol", type=float, default=1e-10)
    p.add_argument("--degree", type=int, default=None, help="truncation degree override")
    p.add_argument("--samples", type=int, default=2048, help="torus samples")
    p.add_argument("--seed", type=int, default=0, help="seed for the random pair when --input is absent")
    p.add_argument("--dim", type=int, default=3, help="dimension of the random pair")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return p


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    config = JobConfig(
        command=args.command, input=args.input, polys=args.poly, tol=args.tol,
        purity_margin=args.purity_margin, trunc_tol=args.trunc_tol, degree=args.degree,
        samples=args.samples, seed=args.seed, dim=args.dim, out=args.out, format=args.format,
    )
    try:
        config.validate()
        if args.input:
            pair = parse_matrix_file(args.input)
            if not isinstance(pair, tuple):
                raise BCLError(f"{args.input}: expected a pair file with keys T1 and T2")
        else:
            pair = random_commuting_pair(args.dim, args.seed)
        report, pts = run_pipeline(config, *pair)
    except BCLError as exc:
        print(f"bclfactor: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"bclfactor: error: {exc}", file=sys.stderr)
        return 1
    if config.format == "csv":
        _write(pointset_to_csv(pts), args.out)
    else:
        _write(dumps(report.to_json()), args.out)
    return 0 if report.passed else 2


if __name__ == "__main__":
    sys.exit(main())
