"""Dense GF(2) linear algebra on small ``uint8`` matrices."""

from __future__ import annotations

import numpy as np


def as_gf2(mat) -> np.ndarray:
    a = np.asarray(mat, dtype=np.uint8)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return a & 1


def rref(mat, track: bool = False):
    """Row-reduce ``mat`` over GF(2).

    Returns ``(reduced, pivots)`` or, with ``track=True``, ``(reduced, pivots,
    transform)`` where ``transform @ mat == reduced (mod 2)``.
    """
    a = as_gf2(mat).copy()
    rows, cols = a.shape
    t = np.eye(rows, dtype=np.uint8) if track else None
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
            if track:
                t[[r, p]] = t[[p, r]]
        hits = np.flatnonzero(a[:, c])
        hits = hits[hits != r]
        if hits.size:
            a[hits] ^= a[r]
            if track:
                t[hits] ^= t[r]
        pivots.append(c)
        r += 1
    if track:
        return a, pivots, t
    return a, pivots


def rank(mat) -> int:
    a = as_gf2(mat)
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def solve_left(src, dst) -> np.ndarray:
    """Find ``R`` with ``R @ src == dst (mod 2)``.

    Raises ``ValueError`` if some row of ``dst`` is outside the row space of ``src``.
    """
    src = as_gf2(src)
    dst = as_gf2(dst)
    if src.shape[1] != dst.shape[1]:
        raise ValueError("column counts differ")
    red, pivots, t = rref(src, track=True)
    out = np.zeros((dst.shape[0], src.shape[0]), dtype=np.uint8)
    for k, row in enumerate(dst):
        v = row.copy()
        coeff = np.zeros(src.shape[0], dtype=np.uint8)
        for r, c in enumerate(pivots):
            if v[c]:
                v ^= red[r]
                coeff ^= t[r]
        if v.any():
            raise ValueError(f"row {k} of target is not in the row space of the source")
        out[k] = coeff
    return out


def matmul(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64) & 1
    b = np.asarray(b, dtype=np.int64) & 1
    return ((a @ b) & 1).astype(np.uint8)
