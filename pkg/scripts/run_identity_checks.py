"""Run the numeric identity checks and the exact mod-p congruence suite.

Writes a JSON summary when --out is given.
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

from mzvalg.finite_sums import congruence_suite
from mzvalg.numeric import verify_all


@dataclass(frozen=True)
class RunConfig:
    tol: float = 1e-5
    max_weight: int = 6
    max_prime: int = 97


def run_checks(config: RunConfig) -> dict:
    start = time.perf_counter()
    numeric = verify_all(config.tol)
    numeric_time = time.perf_counter() - start
    start = time.perf_counter()
    congruences = congruence_suite(config.max_weight, config.max_prime)
    congruence_time = time.perf_counter() - start
    groups = {name: {"passed": sum(r.passed for r in reports), "total": len(reports)}
              for name, reports in numeric.items()}
    by_family: dict[str, dict[str, int]] = {}
    for c in congruences:
        entry = by_family.setdefault(c.name, {"passed": 0, "total": 0})
        entry["passed"] += c.passed
        entry["total"] += 1
    return {
        "config": asdict(config),
        "numeric": groups,
        "numeric_seconds": round(numeric_time, 2),
        "congruences": by_family,
        "congruence_seconds": round(congruence_time, 2),
        "failures": [r.line() for reports in numeric.values() for r in reports if not r.passed]
        + [c.line() for c in congruences if not c.passed],
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tol", type=float, default=RunConfig.tol)
    parser.add_argument("--max-weight", type=int, default=RunConfig.max_weight)
    parser.add_argument("--max-prime", type=int, default=RunConfig.max_prime)
    parser.add_argument("--out", help="write JSON summary to this path")
    args = parser.parse_args(argv)
    summary = run_checks(RunConfig(args.tol, args.max_weight, args.max_prime))
    for section in ("numeric", "congruences"):
        for name, entry in summary[section].items():
            print(f"{section:11} {name:16} {entry['passed']}/{entry['total']}")
    print(f"numeric {summary['numeric_seconds']}s, congruences {summary['congruence_seconds']}s")
    for line in summary["failures"]:
        print("FAIL", line)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(summary, fh, indent=2)
    return 1 if summary["failures"] else 0


if __name__ == "__main__":
    raise SystemExit(main())
