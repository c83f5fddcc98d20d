"""Build every character family of U(q), report per-family counts and timings.

    python scripts/build_table.py --q 3 --out table_q3.json
"""

from __future__ import annotations

import argparse
import json
import logging
import time
from dataclasses import dataclass

from d4sylow.families import build_all
from d4sylow.gf import field_from_q


@dataclass
class TableConfig:
    q: int = 2
    allow_large: bool = False
    out: str | None = None
    characters: bool = False  # include the full value vectors


def run(cfg: TableConfig) -> dict:
    F = field_from_q(cfg.q)
    t0 = time.perf_counter()
    rep = build_all(F, allow_large=cfg.allow_large, strict=False)
    out = {
        "q": cfg.q,
        "seconds": round(time.perf_counter() - t0, 2),
        "checks": rep.checks,
        "details": {k: ({str(a): b for a, b in v.items()} if isinstance(v, dict) else v)
                    for k, v in rep.details.items()},
        "families": [f.summary() for f in rep.families],
    }
    if cfg.characters:
        out["characters"] = [c.to_json() for c in rep.characters]
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--q", type=int, default=2)
    ap.add_argument("--allow-large", action="store_true")
    ap.add_argument("--characters", action="store_true")
    ap.add_argument("--out")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    cfg = TableConfig(args.q, args.allow_large, args.out, args.characters)
    res = run(cfg)
    text = json.dumps(res, indent=1)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    for f in res["families"]:
        print(f"{f['family']:>14}  {f['computed']}  {'ok' if all(f['flags'].values()) else 'FAIL'}  {f['seconds']}s")
    print("all checks pass" if all(res["checks"].values()) else "SOME CHECKS FAIL")


if __name__ == "__main__":
    main()
