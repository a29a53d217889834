"""Hot loops of the compatibility engine, in two interchangeable backends.

Box layout shared by both backends: ``F`` is a C-contiguous uint64 array of
shape ``(m, m, R, nw)``.  ``F[i, j]`` is the compatibility matrix of clauses
``i`` and ``j`` (0-based) with one bitset per matrix row: bit ``b`` of row
``a`` lives in word ``b >> 6`` at position ``b & 63``.  ``R`` is the largest
row count in the formula and ``nw = ceil(R / 64)``; rows and columns past a
clause's own row count stay zero.

The backend is chosen by the ``COMPATSAT_BACKEND`` environment variable
(``numba``, ``numpy`` or ``auto``; ``auto`` uses numba when importable).
"""

from __future__ import annotations

import os
from typing import Callable, NamedTuple

import numpy as np

try:
    import numba
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

WORD = 64


def words_for(ncols: int) -> int:
    return max(1, (ncols + WORD - 1) // WORD)


def pack_rows(bits: np.ndarray, nw: int | None = None) -> np.ndarray:
    """Pack a bool array along its last axis into little-endian uint64 words."""
    bits = np.asarray(bits, dtype=bool)
    ncols = bits.shape[-1]
    nw = words_for(ncols) if nw is None else nw
    pad = nw * WORD - ncols
    if pad:
        bits = np.concatenate([bits, np.zeros(bits.shape[:-1] + (pad,), dtype=bool)], axis=-1)
    packed = np.packbits(bits, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


def unpack_rows(words: np.ndarray, ncols: int) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype="<u8")
    raw = np.unpackbits(words.view(np.uint8), axis=-1, bitorder="little")
    return raw[..., :ncols].astype(bool)


# --------------------------------------------------------------------------
# numpy backend


def _fill_compat_numpy(F, scope, width, values, sat, nrows):
    m = F.shape[0]
    R = F.shape[2]
    nw = F.shape[3]
    wmax = scope.shape[1]
    for i in range(m - 1):
        js = np.arange(i + 1, m)
        compat = sat[i][None, :, None] & sat[js][:, None, :]
        for p in range(width[i]):
            v = scope[i, p]
            for q in range(wmax):
                shared = scope[js, q] == v
                if not shared.any():
                    continue
                differ = values[i, :, p][None, :, None] != values[js, :, q][:, None, :]
                compat &= ~(shared[:, None, None] & differ)
        F[i, i + 1:] = pack_rows(compat[:, :R, :R], nw)
    return F


def _deplete_numpy(F, nrows, a, lo, upper):
    m, _, R, nw = F.shape
    idx = np.array([b for b in range(lo, m) if b != a], dtype=np.int64)
    if idx.size < 2:
        return False, 0
    K = idx.size
    U = unpack_rows(F[a][idx], R)  # (K, gamma, alpha)
    Y = U.transpose(1, 0, 2).reshape(R, K * R).astype(np.float32)
    block = max(1, (8 << 20) // (R * K * R))
    pos = np.arange(K)
    changed = False
    nfalse = 0
    for s0 in range(0, K, block):
        s1 = min(K, s0 + block)
        B = s1 - s0
        X = U[s0:s1].transpose(0, 2, 1).reshape(B * R, R).astype(np.float32)
        P = (X @ Y > 0).reshape(B, R, K, R).transpose(0, 2, 1, 3)
        Pw = pack_rows(P, nw)
        rows, cols = idx[s0:s1], idx
        old = F[np.ix_(rows, cols)]
        if upper:
            keep = pos[None, :] > pos[s0:s1, None]
        else:
            keep = pos[None, :] != pos[s0:s1, None]
        new = np.where(keep[:, :, None, None], old & Pw, old)
        if not changed and (new != old).any():
            changed = True
        F[np.ix_(rows, cols)] = new
        nfalse += int((keep & ~new.any(axis=(2, 3))).sum())
    return changed, nfalse


# --------------------------------------------------------------------------
# numba backend

if numba is not None:

    @njit(cache=True)
    def _fill_compat_numba(F, scope, width, values, sat, nrows):
        m = F.shape[0]
        wmax = scope.shape[1]
        sp = np.empty(wmax * wmax, dtype=np.int64)
        sq = np.empty(wmax * wmax, dtype=np.int64)
        for i in range(m - 1):
            for j in range(i + 1, m):
                ns = 0
                for p in range(width[i]):
                    for q in range(width[j]):
                        if scope[i, p] == scope[j, q]:
                            sp[ns] = p
                            sq[ns] = q
                            ns += 1
                for al in range(nrows[i]):
                    if not sat[i, al]:
                        continue
                    for be in range(nrows[j]):
                        if not sat[j, be]:
                            continue
                        ok = True
                        for t in range(ns):
                            if values[i, al, sp[t]] != values[j, be, sq[t]]:
                                ok = False
                                break
                        if ok:
                            F[i, j, al, be >> 6] |= np.uint64(1) << np.uint64(be & 63)
        return F

    @njit(cache=True)
    def _deplete_numba(F, nrows, a, lo, upper):
        m = F.shape[0]
        R = F.shape[2]
        nw = F.shape[3]
        ra = nrows[a]
        eg = np.empty(R * R, dtype=np.int64)
        ea = np.empty(R * R, dtype=np.int64)
        res = np.zeros((R, nw), dtype=np.uint64)
        one = np.uint64(1)
        changed = False
        nfalse = 0
        for b in range(lo, m):
            if b == a:
                continue
            rb = nrows[b]
            ne = 0
            for g in range(ra):
                for al in range(rb):
                    if (F[a, b, g, al >> 6] >> np.uint64(al & 63)) & one:
                        eg[ne] = g
                        ea[ne] = al
                        ne += 1
            c0 = b + 1 if upper else lo
            for c in range(c0, m):
                if c == a or c == b:
                    continue
                ncw = (nrows[c] + 63) >> 6
                for al in range(rb):
                    for w in range(ncw):
                        res[al, w] = 0
                for e in range(ne):
                    g = eg[e]
                    al = ea[e]
                    for w in range(ncw):
                        res[al, w] |= F[a, c, g, w]
                anyset = False
                for al in range(rb):
                    for w in range(ncw):
                        old = F[b, c, al, w]
                        new = old & res[al, w]
                        if new != old:
                            F[b, c, al, w] = new
                            changed = True
                        if new != 0:
                            anyset = True
                if not anyset:
                    nfalse += 1
        return changed, nfalse

    @njit(cache=True)
    def _deplete_numba_1w(F, nrows, a, lo, upper):
        # F is (m, m, R): every matrix row fits one word (R <= 64)
        m = F.shape[0]
        R = F.shape[2]
        ra = nrows[a]
        eg = np.empty(R * R, dtype=np.int64)
        ea = np.empty(R * R, dtype=np.int64)
        res = np.zeros(R, dtype=np.uint64)
        one = np.uint64(1)
        zero = np.uint64(0)
        changed = False
        nfalse = 0
        for b in range(lo, m):
            if b == a:
                continue
            rb = nrows[b]
            Fab = F[a, b]
            ne = 0
            for g in range(ra):
                row = Fab[g]
                if row == zero:
                    continue
                for al in range(rb):
                    if (row >> np.uint64(al)) & one:
                        eg[ne] = g
                        ea[ne] = al
                        ne += 1
            c0 = b + 1 if upper else lo
            for c in range(c0, m):
                if c == a or c == b:
                    continue
                Fac = F[a, c]
                Fbc = F[b, c]
                for al in range(rb):
                    res[al] = zero
                for e in range(ne):
                    res[ea[e]] |= Fac[eg[e]]
                acc = zero
                for al in range(rb):
                    old = Fbc[al]
                    new = old & res[al]
                    if new != old:
                        Fbc[al] = new
                        changed = True
                    acc |= new
                if acc == zero:
                    nfalse += 1
        return changed, nfalse

    def _deplete_numba_dispatch(F, nrows, a, lo, upper):
        if F.shape[3] == 1:
            return _deplete_numba_1w(F.reshape(F.shape[:3]), nrows, a, lo, upper)
        return _deplete_numba(F, nrows, a, lo, upper)


class Backend(NamedTuple):
    name: str
    fill_compat: Callable
    deplete_pivot: Callable


NUMPY = Backend("numpy", _fill_compat_numpy, _deplete_numpy)
NUMBA = Backend("numba", _fill_compat_numba, _deplete_numba_dispatch) if numba is not None else None


def get_backend(name: str | None = None) -> Backend:
    name = (name or os.environ.get("COMPATSAT_BACKEND", "auto")).lower()
    if name == "numpy":
        return NUMPY
    if name in ("numba", "auto"):
        if NUMBA is None:
            if name == "numba":
                raise RuntimeError("COMPATSAT_BACKEND=numba but numba is not importable")
            return NUMPY
        return NUMBA
    raise ValueError(f"unknown backend {name!r}; expected numba, numpy or auto")


_active = get_backend()


def active() -> Backend:
    return _active


def set_backend(name: str | None) -> Backend:
    """Switch the process-wide backend; returns the previous one."""
    global _active
    prev, _active = _active, get_backend(name)
    return prev
