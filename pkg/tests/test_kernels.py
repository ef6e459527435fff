"""The numba and numpy kernel flavours must agree exactly."""

import numpy as np
import pytest

from dialog_annotate import _kernels


def _lcs_reference(a, b):
    m, n = len(a), len(b)
    dp = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            if a[i - 1] == b[j - 1]:
                dp[i][j] = dp[i - 1][j - 1] + 1
            else:
                dp[i][j] = max(dp[i - 1][j], dp[i][j - 1])
    return dp[m][n]


@pytest.mark.parametrize("seed", range(20))
def test_lcs_numpy_matches_reference(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 6, size=rng.integers(0, 40)).astype(np.int64)
    b = rng.integers(0, 6, size=rng.integers(0, 40)).astype(np.int64)
    expected = _lcs_reference(list(a), list(b))
    assert _kernels.lcs_length_numpy(a, b) == expected
    assert _kernels.lcs_length(a, b) == expected


def test_lcs_edge_cases():
    empty = np.array([], dtype=np.int64)
    one = np.array([3], dtype=np.int64)
    assert _kernels.lcs_length(empty, one) == 0
    assert _kernels.lcs_length(one, empty) == 0
    assert _kernels.lcs_length(one, one) == 1


@pytest.mark.parametrize("n,half", [(1, 5), (4, 5), (12, 5), (30, 5), (9, 2)])
def test_rank_matrix_paths_agree(n, half):
    rng = np.random.default_rng(n * 31 + half)
    sim = rng.uniform(-1, 1, size=(n, n))
    sim = (sim + sim.T) / 2
    a = _kernels.rank_matrix_numpy(sim, half)
    b = _kernels.rank_matrix(sim, half)
    np.testing.assert_array_equal(a, b)


def test_rank_matrix_values_by_hand():
    sim = np.array([[0.0, 1.0], [1.0, 0.0]])
    # mask half=1 covers the whole 2x2 matrix everywhere
    rank = _kernels.rank_matrix_numpy(sim, 1)
    # cells with value 1.0 have two lower neighbours out of four
    np.testing.assert_array_equal(rank, [[0.0, 0.5], [0.5, 0.0]])


def test_rank_matrix_symmetry_preserved():
    rng = np.random.default_rng(5)
    sim = rng.uniform(size=(10, 10))
    sim = (sim + sim.T) / 2
    rank = _kernels.rank_matrix(sim, 5)
    np.testing.assert_array_equal(rank, rank.T)


@pytest.mark.skipif(not _kernels.HAS_NUMBA, reason="numba disabled")
def test_numba_flavours_match_numpy():
    rng = np.random.default_rng(11)
    a = rng.integers(0, 5, size=60).astype(np.int64)
    b = rng.integers(0, 5, size=45).astype(np.int64)
    assert _kernels.lcs_length_numba(a, b) == _kernels.lcs_length_numpy(a, b)
    sim = rng.uniform(size=(20, 20))
    np.testing.assert_array_equal(
        _kernels.rank_matrix_numba(sim, 5), _kernels.rank_matrix_numpy(sim, 5)
    )


def test_env_flag_forces_numpy_path(tmp_path):
    import subprocess
    import sys

    code = (
        "from dialog_annotate import _kernels; "
        "print(_kernels.HAS_NUMBA, _kernels.lcs_length is _kernels.lcs_length_numpy)"
    )
    out = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True,
        text=True,
        env={"PATH": "/usr/bin:/bin", "DIALOG_ANNOTATE_NO_NUMBA": "1"},
    )
    assert out.stdout.strip() == "False True"
