"""Leech lattice shell counts from the extended Golay code.

Independent of the modular-form table in ``data/leech_theta.csv``: the
Leech lattice scaled by sqrt(8) is the set of integer vectors ``v`` such that

* all ``v_i`` have the same parity ``m``,
* ``sum v_i = 4 m (mod 8)``,
* the positions with ``v_i = 2 (mod 4)`` (even case) or ``v_i = 1 (mod 4)``
  (odd case) form a Golay codeword.

Counting vectors with ``sum v_i^2 = 8 n`` therefore reduces to the Golay weight
enumerator times a small dynamic program over the coordinates.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache

import numpy as np

# generator polynomial of the cyclic [23, 12, 7] Golay code
_GOLAY_POLY = (1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1)  # 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11


@lru_cache(maxsize=1)
def golay_codewords() -> np.ndarray:
    """All 4096 words of the extended binary Golay code, shape (4096, 24)."""
    gens = []
    for shift in range(12):
        row = np.zeros(23, dtype=np.int64)
        row[shift:shift + 12] = _GOLAY_POLY
        gens.append(row)
    G = np.array(gens)
    msgs = (np.arange(4096)[:, None] >> np.arange(12)) & 1
    words = (msgs @ G) % 2
    parity = words.sum(axis=1) % 2
    return np.column_stack([words, parity])


def golay_weight_enumerator() -> dict[int, int]:
    w = golay_codewords().sum(axis=1)
    return dict(sorted(Counter(int(v) for v in w).items()))


def _residue_values(residue: int, limit: int) -> list[int]:
    """Integers v with v = residue (mod 4) and v^2 <= limit."""
    out = []
    v = -int(limit ** 0.5) - 4
    while v * v > limit or (v - residue) % 4:
        v += 1
    while v * v <= limit:
        if (v - residue) % 4 == 0:
            out.append(v)
        v += 1
    return out


def _coordinate_dp(n_coords: int, residue: int, max_sq: int) -> dict[tuple[int, int], int]:
    """Counts of (sum of squares, sum mod 8) over n_coords coordinates."""
    vals = _residue_values(residue, max_sq)
    state = {(0, 0): 1}
    for _ in range(n_coords):
        new: dict[tuple[int, int], int] = {}
        for (sq, sm), c in state.items():
            for v in vals:
                s2 = sq + v * v
                if s2 > max_sq:
                    continue
                key = (s2, (sm + v) % 8)
                new[key] = new.get(key, 0) + c
        state = new
    return state


def _combine(a, b, target_sq: int, target_mod: int) -> int:
    total = 0
    for (sq1, m1), c1 in a.items():
        need = target_sq - sq1
        for m2 in range(8):
            if (m1 + m2) % 8 == target_mod:
                total += c1 * b.get((need, m2), 0)
    return total


def leech_shell_count(norm: int) -> int:
    """Number of Leech vectors of squared norm ``norm`` (unimodular scale)."""
    if norm == 0:
        return 1
    if norm < 0 or norm % 2:
        return 0
    target = 8 * norm
    weights = golay_weight_enumerator()
    total = 0
    # even vectors: 2 mod 4 on a codeword, 0 mod 4 elsewhere, sum = 0 mod 8
    for w, a_w in weights.items():
        inside = _coordinate_dp(w, 2, target)
        outside = _coordinate_dp(24 - w, 0, target)
        total += a_w * _combine(inside, outside, target, 0)
    # odd vectors: 1 mod 4 on a codeword, 3 mod 4 elsewhere, sum = 4 mod 8
    for w, a_w in weights.items():
        inside = _coordinate_dp(w, 1, target)
        outside = _coordinate_dp(24 - w, 3, target)
        total += a_w * _combine(inside, outside, target, 4)
    return total
