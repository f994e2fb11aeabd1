#!/usr/bin/env python3
"""Re-derive the first Leech shells from the Golay code and compare with the
shipped table.  Exits nonzero on any mismatch."""

import argparse
import sys

from qpaving.catalog import leech_theta_series
from qpaving.golay import golay_weight_enumerator, leech_shell_count


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-norm", type=int, default=6)
    args = ap.parse_args()
    print("golay weights:", golay_weight_enumerator())
    table = leech_theta_series()
    ok = True
    for norm in range(0, args.max_norm + 1, 2):
        derived = leech_shell_count(norm)
        shipped = table.count_at(float(norm))
        flag = "ok" if derived == shipped else "MISMATCH"
        ok &= derived == shipped
        print(f"norm {norm:3d}: derived {derived:>24d}  table {shipped:>24d}  {flag}")
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
