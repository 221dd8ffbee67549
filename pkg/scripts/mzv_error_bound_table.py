"""Tabulate reported MZV error bounds against closed-form values.

For each composition with a known closed form, prints the computed value,
the reported bound, the true error, and whether the bound is honest.
"""

from __future__ import annotations

import argparse
import math
from dataclasses import dataclass, field

from mzvalg.numeric import MZVConfig, mzv

ZETA3 = 1.2020569031595942854

CLOSED_FORMS = {
    (2,): math.pi ** 2 / 6,
    (3,): ZETA3,
    (4,): math.pi ** 4 / 90,
    (6,): math.pi ** 6 / 945,
    (2, 1): ZETA3,
    (2, 2): math.pi ** 4 / 120,
    (3, 1): math.pi ** 4 / 360,
    (2, 1, 1): math.pi ** 4 / 90,
    (2, 2, 2): math.pi ** 6 / 5040,
    (4, 2): ZETA3 ** 2 - 4 * math.pi ** 6 / 2835,
}


@dataclass(frozen=True)
class TableConfig:
    tols: tuple[float, ...] = (1e-5, 1e-8)
    mzv: MZVConfig = field(default_factory=MZVConfig)


def build_rows(config: TableConfig):
    rows = []
    for tol in config.tols:
        for I, exact in CLOSED_FORMS.items():
            v = mzv(I, tol, config.mzv)
            err = abs(v.value - exact)
            rows.append((tol, I, v.value, v.error_bound, err, err <= v.error_bound, v.warning))
    return rows


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tol", type=float, action="append", help="tolerance (repeatable)")
    args = parser.parse_args(argv)
    config = TableConfig(tols=tuple(args.tol)) if args.tol else TableConfig()
    rows = build_rows(config)
    print(f"{'tol':>8} {'I':<12} {'value':>22} {'bound':>10} {'true err':>10} honest warn")
    for tol, I, val, bound, err, honest, warn in rows:
        print(f"{tol:8.0e} {str(I):<12} {val:22.17f} {bound:10.2e} {err:10.2e} {str(honest):>6} {warn}")
    dishonest = sum(not r[5] for r in rows)
    print(f"dishonest bounds: {dishonest}/{len(rows)}")
    return 1 if dishonest else 0


if __name__ == "__main__":
    raise SystemExit(main())
