"""Print the verdict matrix of every golden case and the oracle checks."""
import argparse
import sys

from utilstreams.corpus import CASES_BY_NAME, run_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--case", choices=sorted(CASES_BY_NAME))
    ap.add_argument("--format", choices=("text", "machine"), default="text")
    args = ap.parse_args()
    report = run_corpus(args.case, fmt=args.format)
    sys.stdout.write(report.render())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
