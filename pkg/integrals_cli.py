import argparse
import sys

from integrals.generators import FAMILIES
from integrals.runner import run_generate, run_spec
from integrals.tasks import ApproxTableTask, CompareTask


def build_parser():
    parser = argparse.ArgumentParser(
        description="Exact measure-theoretic and Bochner integrals over finite measure spaces"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    integrate = subparsers.add_parser("integrate", help="run the task declared in a spec file")
    integrate.add_argument("--spec", required=True, help="path to a JSON spec file")

    compare = subparsers.add_parser("compare", help="compare both integrals of a scalar function")
    compare.add_argument("--spec", required=True, help="path to a JSON spec file")
    compare.add_argument("--depth", type=int, help="last dyadic level of the series")
    compare.add_argument("--eta", help='slack of the summability certificate, as "p/q"')

    table = subparsers.add_parser("table", help="write the dyadic convergence table as CSV")
    table.add_argument("--spec", required=True, help="path to a JSON spec file")
    table.add_argument("--max-level", type=int, help="last level of the table")
    table.add_argument("--out", help="CSV file to write")

    gen = subparsers.add_parser("gen", help="write seeded random cases, one spec per line")
    gen.add_argument("--family", required=True, choices=FAMILIES)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--count", type=int, default=1)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "integrate":
        return run_spec(args.spec)
    if args.command == "compare":
        return run_spec(args.spec, CompareTask, {"depth": args.depth, "eta": args.eta})
    if args.command == "table":
        return run_spec(args.spec, ApproxTableTask, {"max_level": args.max_level}, out=args.out)
    return run_generate(args.family, args.seed, args.count)


if __name__ == "__main__":
    sys.exit(main())
