#!/usr/bin/env python3
"""Regenerate src/qpaving/data/leech_theta.csv.

The Leech theta series is E_12 - (65520/691) Delta, so the number of vectors
of norm 2m is 65520/691 * (sigma_11(m) - tau(m)).  tau comes from the
q-expansion of Delta = q prod (1 - q^k)^24, computed with exact integers.
"""

import argparse
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "qpaving" / "data" / "leech_theta.csv"


def ramanujan_tau(n_max):
    # coefficients of prod_{k>=1} (1 - q^k)^24 up to q^(n_max - 1)
    poly = [0] * n_max
    poly[0] = 1
    for k in range(1, n_max):
        for _ in range(24):
            for i in range(n_max - 1, k - 1, -1):
                poly[i] -= poly[i - k]
    return [0] + poly[: n_max]  # tau(n) = coefficient of q^(n-1) in the product


def sigma(k, m):
    return sum(d ** k for d in range(1, m + 1) if m % d == 0)


def leech_counts(m_max):
    tau = ramanujan_tau(m_max + 1)
    counts = [1]
    for m in range(1, m_max + 1):
        num = 65520 * (sigma(11, m) - tau[m])
        q, r = divmod(num, 691)
        if r:
            raise SystemExit(f"non-integral count at m={m}")
        counts.append(q)
    return counts


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-m", type=int, default=60, help="largest m (norm 2m) to tabulate")
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args()
    counts = leech_counts(args.max_m)
    with open(args.out, "w") as fh:
        fh.write("norm2,count\n")
        for m, c in enumerate(counts):
            if c:
                fh.write(f"{2 * m},{c}\n")
    print(f"wrote {args.out} ({sum(1 for c in counts if c)} rows)")


if __name__ == "__main__":
    main()
