"""K-bar orbits on the linear characters of A-bar, and the closed-form conjugation check.

    python scripts/orbit_analysis.py --q 2 3 4
"""

from __future__ import annotations

import argparse
import json
import time

from d4sylow.families import k_orbit_analysis, verify_conjugation_formula
from d4sylow.gf import field_from_q


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--q", type=int, nargs="+", default=[2, 3, 4])
    args = ap.parse_args()
    for q in args.q:
        F = field_from_q(q)
        t0 = time.perf_counter()
        rep = k_orbit_analysis(F).to_json()
        rep["conjugation formula exhaustive"] = verify_conjugation_formula(F)
        rep["seconds"] = round(time.perf_counter() - t0, 2)
        print(json.dumps(rep))


if __name__ == "__main__":
    main()
