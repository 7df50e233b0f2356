"""Row reduction kernels over Z/p.

Two interchangeable implementations of the same routine: a numba-compiled
scalar loop and a vectorised numpy version.  Set ``BGGTATE_DISABLE_NUMBA=1``
to force the numpy path (also used automatically when numba is missing).
"""

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def numba_enabled():
    flag = os.environ.get("BGGTATE_DISABLE_NUMBA", "").strip().lower()
    return HAVE_NUMBA and flag not in ("1", "true", "yes", "on")


def rref_mod_p_numpy(a, p, ncols_pivot):
    """Reduce ``a`` (int64, entries in [0, p)) in place.

    Pivots are searched only in the first ``ncols_pivot`` columns, which lets
    callers carry an augmented block along.  Returns (rank, pivot columns).
    """
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(ncols_pivot):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = (a[r, c:] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit, c:] = (a[hit, c:] - np.outer(col[hit], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return r, np.array(pivots, dtype=np.int64)


if HAVE_NUMBA:

    @njit(cache=True)
    def _inv_mod(x, p):
        result = 1
        base = x % p
        e = p - 2
        while e > 0:
            if e & 1:
                result = (result * base) % p
            base = (base * base) % p
            e >>= 1
        return result

    @njit(cache=True)
    def _rref_mod_p_jit(a, p, ncols_pivot):
        rows, cols = a.shape
        pivots = np.empty(min(rows, ncols_pivot), dtype=np.int64)
        r = 0
        for c in range(ncols_pivot):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    t = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = t
            inv = _inv_mod(a[r, c], p)
            for j in range(c, cols):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(rows):
                if i == r:
                    continue
                f = a[i, c]
                if f == 0:
                    continue
                for j in range(c, cols):
                    v = (a[i, j] - f * a[r, j]) % p
                    if v < 0:
                        v += p
                    a[i, j] = v
            pivots[r] = c
            r += 1
        return r, pivots[:r].copy()

    def rref_mod_p_numba(a, p, ncols_pivot):
        rank, piv = _rref_mod_p_jit(a, np.int64(p), np.int64(ncols_pivot))
        return int(rank), piv

else:  # pragma: no cover
    rref_mod_p_numba = rref_mod_p_numpy


def rref_mod_p(a, p, ncols_pivot=None):
    """Dispatch to the compiled or numpy kernel.  ``a`` is modified in place."""
    if ncols_pivot is None:
        ncols_pivot = a.shape[1]
    if a.shape[0] == 0 or ncols_pivot == 0:
        return 0, np.zeros(0, dtype=np.int64)
    # the compiled loop multiplies two residues, so keep p*p inside int64
    if numba_enabled() and p < 3037000499:
        return rref_mod_p_numba(a, p, ncols_pivot)
    return rref_mod_p_numpy(a, p, ncols_pivot)
