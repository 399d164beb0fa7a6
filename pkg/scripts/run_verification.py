"""Run all verification suites and write the JSON report.

    python scripts/run_verification.py [out.json] [--trials N]
"""

import argparse
import sys

from z22susy.verify import VerifyConfig, run


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("out", nargs="?", default="verification.json")
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--timing", action="store_true", help="include wall-clock timing per suite")
    args = ap.parse_args()
    report = run("all", VerifyConfig(seed=args.seed, trials=args.trials))
    with open(args.out, "w") as f:
        f.write(report.to_json(include_timing=args.timing) if args.timing else report.to_json())
    print(f"{len(report.checks)} checks, {len(report.failures)} failures, {len(report.findings)} findings -> {args.out}")
    for c in report.findings:
        print(f"  finding {c.id}: {c.witness.splitlines()[0] if c.witness else ''}")
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
