"""Reference kernels for the level-ordered tree layout (numpy / Python ints).

Layout: level 0 is the base vertex; level 1 holds its q+1 neighbours in
branch order; a vertex with local index j on level m >= 1 has children
j*q .. j*q+q-1 on level m+1.  Values are integer numerators over a common
denominator held by the caller.
"""
from __future__ import annotations

import numpy as np

INT64_MAX = np.iinfo(np.int64).max


def level_offsets(q: int, R: int) -> list[int]:
    """Start index of each level 0..R+1 (the last entry is the vertex count)."""
    offs = [0, 1]
    size = q + 1
    for _ in range(R):
        offs.append(offs[-1] + size)
        size *= q
    return offs[: R + 2]


def _fits_int64(num: np.ndarray, factor: int) -> bool:
    if num.size == 0:
        return True
    m = int(np.abs(num).max())
    return m * factor <= INT64_MAX


def laplacian_step(num: np.ndarray, q: int, R: int) -> np.ndarray:
    """Numerators of ``(q+1) * Laplacian`` on radius R-1 from numerators on radius R."""
    if R < 1:
        raise ValueError("need radius >= 1")
    if num.dtype != object and not _fits_int64(num, 2 * (q + 1)):
        num = num.astype(object)
    offs = level_offsets(q, R)
    out = np.empty(offs[R], dtype=num.dtype)
    for m in range(R):
        cur = num[offs[m]:offs[m + 1]]
        kids = num[offs[m + 1]:offs[m + 2]]
        if m == 0:
            s = kids.sum(keepdims=True)
        else:
            s = kids.reshape(-1, q).sum(axis=1)
            prev = num[offs[m - 1]:offs[m]]
            s = s + (prev[0] if m == 1 else np.repeat(prev, q))
        out[offs[m]:offs[m + 1]] = s - (q + 1) * cur
    return out


def exact_sum(block: np.ndarray) -> int:
    if block.size == 0:
        return 0
    if block.dtype == object:
        return int(sum(block.tolist()))
    m = int(np.abs(block).max())
    if m == 0:
        return 0
    chunk = max(1, INT64_MAX // m)
    if chunk >= block.size:
        return int(block.sum())
    return sum(int(block[i:i + chunk].sum()) for i in range(0, block.size, chunk))


def branch_sums(num: np.ndarray, q: int, R: int, n: int) -> list[int]:
    """Exact sums of level-n numerators per first-step branch (q+1 entries; 1 at n=0)."""
    offs = level_offsets(q, R)
    level = num[offs[n]:offs[n + 1]]
    if n == 0:
        return [int(level[0])]
    width = q ** (n - 1)
    return [exact_sum(level[b * width:(b + 1) * width]) for b in range(q + 1)]
