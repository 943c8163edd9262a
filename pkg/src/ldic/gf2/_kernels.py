"""Bit-packed GF(2) elimination kernels.

Rows are packed little-endian into uint64 words: column ``c`` lives in word
``c >> 6`` at bit ``c & 63``. The numba kernel is used unless
``LDIC_NO_NUMBA`` is set to a truthy value (or numba is unavailable), in
which case the vectorised numpy kernel runs instead. Both kernels mutate
their input in place and return the pivot columns.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLE = os.environ.get("LDIC_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:  # pragma: no cover - import guard
    if _DISABLE:
        raise ImportError("numba disabled by LDIC_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack a (rows, cols) 0/1 array into a (rows, ceil(cols/64)) uint64 array."""
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    rows, cols = bits.shape
    nwords = max(1, (cols + 63) // 64)
    packed = np.packbits(bits, axis=1, bitorder="little")
    out = np.zeros((rows, nwords * 8), dtype=np.uint8)
    out[:, : packed.shape[1]] = packed
    return out.view("<u8").reshape(rows, nwords).astype(np.uint64, copy=False)


def unpack_rows(words: np.ndarray, cols: int) -> np.ndarray:
    rows = words.shape[0]
    if rows == 0:
        return np.zeros((0, cols), dtype=np.uint8)
    as_bytes = np.ascontiguousarray(words).astype("<u8", copy=False).view(np.uint8).reshape(rows, -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :cols]


def rref_numpy(words: np.ndarray, ncols: int) -> np.ndarray:
    nrows = words.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        wi = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        hits = np.flatnonzero(words[r:, wi] & bit)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            words[[r, p]] = words[[p, r]]
        mask = (words[:, wi] & bit) != 0
        mask[r] = False
        if mask.any():
            words[mask, wi:] ^= words[r, wi:]
        pivots.append(c)
        r += 1
    return np.asarray(pivots, dtype=np.int64)


if HAVE_NUMBA:

    @njit(cache=True)
    def rref_numba(words, ncols):  # pragma: no cover - compiled
        nrows, nwords = words.shape
        pivots = np.empty(min(nrows, ncols), dtype=np.int64)
        r = 0
        one = np.uint64(1)
        for c in range(ncols):
            if r == nrows:
                break
            wi = c >> 6
            bit = one << np.uint64(c & 63)
            p = -1
            for i in range(r, nrows):
                if words[i, wi] & bit:
                    p = i
                    break
            if p < 0:
                continue
            if p != r:
                for k in range(nwords):
                    tmp = words[r, k]
                    words[r, k] = words[p, k]
                    words[p, k] = tmp
            for i in range(nrows):
                if i != r and (words[i, wi] & bit):
                    for k in range(wi, nwords):
                        words[i, k] ^= words[r, k]
            pivots[r] = c
            r += 1
        return pivots[:r]

else:  # pragma: no cover
    rref_numba = None


def rref_packed(words: np.ndarray, ncols: int, backend: str | None = None) -> np.ndarray:
    """Reduce packed rows to reduced row echelon form in place; return pivot columns."""
    backend = backend or BACKEND
    if backend == "numba":
        if rref_numba is None:
            raise RuntimeError("numba backend requested but numba is not available")
        return rref_numba(words, ncols)
    return rref_numpy(words, ncols)


BACKEND = "numba" if HAVE_NUMBA else "numpy"
