#!/usr/bin/env python3
"""Run the property suite and write a JSON summary.

    python3 scripts/run_suite.py --instances 200 --seed 0 --out suite.json
    python3 scripts/run_suite.py --families eigen_soundness,singular --instances 50
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from relbound.harness.report import to_record
from relbound.harness.suite import FAMILIES, SuiteConfig, run_suite


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--instances", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-max", type=int, default=32)
    p.add_argument("--families", default=",".join(FAMILIES), help="comma-separated family names")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--dump-dir", default="relbound_failures")
    p.add_argument("--inject-bug", choices=("upper_index",))
    p.add_argument("--out", type=Path)
    args = p.parse_args(argv)

    cfg = SuiteConfig(
        families={name: args.instances for name in args.families.split(",") if name},
        seed=args.seed,
        n_max=args.n_max,
        dump_dir=args.dump_dir,
        inject_bug=args.inject_bug,
        workers=args.workers,
    )
    summary = run_suite(cfg)
    for line in summary.lines():
        print(line)
    if args.out:
        args.out.write_text(json.dumps(to_record(summary), indent=2) + "\n")
        print(f"summary written to {args.out}")
    return 0 if summary.all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
