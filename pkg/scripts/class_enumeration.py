"""Time conjugacy-class enumeration of U(q) and compare with the class-count polynomial.

    python scripts/class_enumeration.py --q 2 3 4 --method auto
"""

from __future__ import annotations

import argparse
import json
import resource
import time
from dataclasses import asdict, dataclass

import numpy as np

from d4sylow.classes import class_count_polynomial, conjugacy_classes
from d4sylow.gf import field_from_q


@dataclass
class EnumConfig:
    qs: tuple[int, ...] = (2, 3)
    method: str = "auto"
    quotient: tuple[int, ...] = ()


def run(cfg: EnumConfig) -> list[dict]:
    rows = []
    for q in cfg.qs:
        F = field_from_q(q)
        t0 = time.perf_counter()
        cd = conjugacy_classes(F, cfg.quotient, method=cfg.method, allow_large=True)
        secs = time.perf_counter() - t0
        row = {
            "q": q,
            "classes": cd.count,
            "polynomial": class_count_polynomial(q) if not cfg.quotient else None,
            "seconds": round(secs, 2),
            "max_rss_mb": resource.getrusage(resource.RUSAGE_SELF).ru_maxrss // 1024,
            "size_histogram": {str(k): int(v) for k, v in zip(*np.unique(cd.sizes, return_counts=True))},
        }
        rows.append(row)
        print(json.dumps(row), flush=True)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--q", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--method", choices=("auto", "bfs", "labels"), default="auto")
    ap.add_argument("--quotient", type=int, nargs="*", default=[])
    args = ap.parse_args()
    cfg = EnumConfig(tuple(args.q), args.method, tuple(args.quotient))
    print(json.dumps({"config": asdict(cfg)}))
    run(cfg)


if __name__ == "__main__":
    main()
