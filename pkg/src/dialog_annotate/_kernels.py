"""Hot numeric kernels: LCS length and the C99 local rank transform.

Both exist in two interchangeable flavours: a numba ``@njit`` version and a
vectorized pure-numpy version. The numba path is used when numba imports
cleanly; set ``DIALOG_ANNOTATE_NO_NUMBA=1`` to force the numpy path (useful
for debugging and for the benchmark in ``bench/bench_kernels.py``).

Both flavours produce identical results: the rank transform does integer
counting before a single float division, and the LCS recurrences are exact
integer DP.
"""

import os

import numpy as np

NUMBA_DISABLED = os.environ.get("DIALOG_ANNOTATE_NO_NUMBA", "").lower() in {
    "1",
    "true",
    "yes",
}

try:
    if NUMBA_DISABLED:
        raise ImportError("numba disabled via DIALOG_ANNOTATE_NO_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def lcs_length_numpy(a, b):
    """Length of the longest common subsequence of two int code arrays.

    Row-sweep DP over the monotone formulation: each new row is the running
    maximum of the previous row and the match bonuses, which vectorizes.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        return 0
    dp = np.zeros(b.size + 1, dtype=np.int64)
    for i in range(a.size):
        bonus = np.where(b == a[i], dp[:-1] + 1, 0)
        np.maximum(dp[1:], bonus, out=dp[1:])
        np.maximum.accumulate(dp, out=dp)
    return int(dp[-1])


def _lcs_length_loop(a, b):
    m = a.size
    n = b.size
    dp = np.zeros(n + 1, dtype=np.int64)
    for i in range(m):
        prev = np.int64(0)
        for j in range(1, n + 1):
            tmp = dp[j]
            if a[i] == b[j - 1] and prev + 1 > dp[j]:
                dp[j] = prev + 1
            if dp[j - 1] > dp[j]:
                dp[j] = dp[j - 1]
            prev = tmp
    return dp[n]


def rank_matrix_numpy(sim, half):
    """C99 local rank transform of a similarity matrix.

    rank[i, j] = fraction of cells in the (2*half+1)^2 mask centred on
    (i, j), clipped at the matrix edges, whose value is strictly below
    sim[i, j]. The mask includes the centre cell in the denominator.
    """
    sim = np.asarray(sim, dtype=np.float64)
    n = sim.shape[0]
    counts = np.zeros((n, n), dtype=np.int64)
    totals = np.zeros((n, n), dtype=np.int64)
    for di in range(-half, half + 1):
        i0, i1 = max(0, -di), min(n, n - di)
        if i0 >= i1:
            continue
        for dj in range(-half, half + 1):
            j0, j1 = max(0, -dj), min(n, n - dj)
            if j0 >= j1:
                continue
            shifted = sim[i0 + di : i1 + di, j0 + dj : j1 + dj]
            base = sim[i0:i1, j0:j1]
            counts[i0:i1, j0:j1] += shifted < base
            totals[i0:i1, j0:j1] += 1
    return counts.astype(np.float64) / totals.astype(np.float64)


def _rank_matrix_loop(sim, half):
    n = sim.shape[0]
    rank = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        r1 = max(0, i - half)
        r2 = min(n - 1, i + half)
        for j in range(n):
            c1 = max(0, j - half)
            c2 = min(n - 1, j + half)
            below = 0
            for r in range(r1, r2 + 1):
                for c in range(c1, c2 + 1):
                    if sim[r, c] < sim[i, j]:
                        below += 1
            total = (r2 - r1 + 1) * (c2 - c1 + 1)
            rank[i, j] = float(below) / float(total)
    return rank


if HAS_NUMBA:
    lcs_length_numba = njit(cache=True)(_lcs_length_loop)
    rank_matrix_numba = njit(cache=True)(_rank_matrix_loop)

    def lcs_length(a, b):
        return int(
            lcs_length_numba(
                np.ascontiguousarray(a, dtype=np.int64),
                np.ascontiguousarray(b, dtype=np.int64),
            )
        )

    def rank_matrix(sim, half):
        return rank_matrix_numba(np.ascontiguousarray(sim, dtype=np.float64), half)

else:
    lcs_length = lcs_length_numpy
    rank_matrix = rank_matrix_numpy
