from fractions import Fraction
from itertools import combinations, permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bggtate.exactlin import QQ, PrimeField, kernel_basis, make_field, rank, rref, solve


def _det_mod(m, p):
    k = len(m)
    total = 0
    for perm in permutations(range(k)):
        sign = 1
        for i in range(k):
            for j in range(i + 1, k):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = 1
        for i in range(k):
            prod = prod * int(m[i][perm[i]]) % p
        total += sign * prod
    return total % p


def minor_rank(m, p):
    """Largest k with a nonzero k x k minor."""
    rows, cols = m.shape
    for k in range(min(rows, cols), 0, -1):
        for r in combinations(range(rows), k):
            for c in combinations(range(cols), k):
                if _det_mod([[m[i, j] for j in c] for i in r], p):
                    return k
    return 0


def test_rref_identity():
    F = PrimeField(5)
    r, red, piv = rref(F.eye(3), F)
    assert r == 3 and piv == [0, 1, 2]
    assert F.equal(red, F.eye(3))


def test_rref_dependent_rows():
    F = PrimeField(5)
    r, red, piv = rref([[1, 2], [2, 4]], F)
    assert r == 1 and piv == [0]
    assert red.tolist() == [[1, 2], [0, 0]]


def test_rref_empty():
    F = PrimeField(7)
    assert rref(F.zeros(0, 3), F)[0] == 0
    assert rank(F.zeros(2, 0), F) == 0


@pytest.mark.parametrize("seed", range(25))
def test_rank_matches_minor_oracle(seed):
    F = PrimeField(7)
    g = np.random.default_rng(seed)
    m = F.random_matrix(g, 6, 4)
    if seed % 3 == 0:
        m[:, 3] = (2 * m[:, 0] + m[:, 1]) % 7
    assert rank(m, F) == minor_rank(m, 7)


def test_kernel_of_zero_matrix():
    F = PrimeField(5)
    k = kernel_basis(F.zeros(2, 3), F)
    assert F.equal(k, F.eye(3))


def test_kernel_small():
    F = PrimeField(5)
    k = kernel_basis([[1, 2], [2, 4]], F)
    assert k.shape == (2, 1)
    # proportional to (3, 1)
    assert (k[0, 0] * 1 - k[1, 0] * 3) % 5 == 0


def test_solve_identity_and_inconsistent():
    F = PrimeField(5)
    b = F.asarray([3, 4, 1])
    assert F.equal(solve(F.eye(3), b, F), b)
    assert solve([[1, 2], [2, 4]], [1, 3], F) is None


def test_solve_dimension_mismatch_is_distinct():
    F = PrimeField(5)
    with pytest.raises(ValueError, match="dimension mismatch"):
        solve(F.eye(3), [1, 2], F)


def test_rationals_exact():
    m = [[1, 2, 3], [4, 5, 6], [7, 8, 10]]
    r, red, piv = rref(m, QQ)
    assert r == 3 and all(isinstance(x, Fraction) for x in red.flat)
    x = solve(m, [1, 1, 1], QQ)
    assert QQ.equal(QQ.matmul(QQ.asarray(m), x.reshape(-1, 1))[:, 0], QQ.asarray([1, 1, 1]))
    k = kernel_basis([[1, 2, 3], [2, 4, 6]], QQ)
    assert k.shape == (3, 2) and QQ.is_zero(QQ.matmul(QQ.asarray([[1, 2, 3]]), k))


def test_rref_transform_reproduces_matrix():
    for F in (QQ, PrimeField(11)):
        m = F.asarray([[2, 4, 1], [1, 2, 0], [3, 6, 1]])
        _, red, _, T = F.rref_transform(m)
        assert F.equal(F.matmul(T, m), red)
        assert F.equal(F.matmul(F.inverse(T), red), m)


def test_make_field_env(monkeypatch):
    monkeypatch.setenv("BGGTATE_PRIME", "101")
    assert make_field(None).p == 101
    assert make_field("QQ") is QQ
    with pytest.raises(ValueError):
        PrimeField(12)


def test_float_path_matches_integer_product():
    F = PrimeField(32003)
    g = np.random.default_rng(3)
    a, b = F.random_matrix(g, 40, 60), F.random_matrix(g, 60, 30)
    ref = (a.astype(object) @ b.astype(object)) % 32003
    assert (F.matmul(a, b) == ref.astype(np.int64)).all()


matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=150, deadline=None)
@given(matrices, st.sampled_from([5, 7]))
def test_kernel_properties(rows, p):
    F = PrimeField(p)
    m = F.asarray(rows)
    k = kernel_basis(m, F)
    assert F.is_zero(F.matmul(m, k))
    assert rank(k, F) == k.shape[1]
    assert rank(m, F) + k.shape[1] == m.shape[1]


@settings(max_examples=150, deadline=None)
@given(matrices, st.lists(st.integers(0, 6), min_size=6, max_size=6), st.sampled_from([5, 7]))
def test_solve_iff_rank(rows, rhs, p):
    F = PrimeField(p)
    m = F.asarray(rows)
    b = F.asarray(rhs[: m.shape[0]])
    x = solve(m, b, F)
    aug = np.concatenate([m, b.reshape(-1, 1)], axis=1)
    consistent = rank(aug, F) == rank(m, F)
    assert (x is not None) == consistent
    if x is not None:
        assert F.equal(F.matmul(m, x.reshape(-1, 1))[:, 0], b)


# ---------------------------------------------------------------------------
# compiled and numpy kernels


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 5, 7, 32003]), st.integers(1, 12), st.integers(1, 12))
def test_numba_and_numpy_kernels_agree(seed, p, rows, cols):
    from bggtate._kernels import HAVE_NUMBA, rref_mod_p_numba, rref_mod_p_numpy

    if not HAVE_NUMBA:
        pytest.skip("numba not installed")
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, size=(rows, cols)).astype(np.int64)
    a[:, rng.random(cols) < 0.3] = 0
    x, y = a.copy(), a.copy()
    rx, px = rref_mod_p_numba(x, p, cols)
    ry, py = rref_mod_p_numpy(y, p, cols)
    assert rx == ry and list(px) == list(py)
    assert np.array_equal(x, y)


def test_disable_flag_selects_numpy_path(monkeypatch):
    from bggtate import _kernels
    from bggtate.sheaf import cohomology_table
    from conftest import euler_module, sym_ring

    want = cohomology_table(euler_module(sym_ring(2)), -4, 2).to_json()
    monkeypatch.setenv("BGGTATE_DISABLE_NUMBA", "1")
    assert not _kernels.numba_enabled()
    assert cohomology_table(euler_module(sym_ring(2)), -4, 2).to_json() == want
    monkeypatch.setenv("BGGTATE_DISABLE_NUMBA", "0")
    assert _kernels.numba_enabled() == _kernels.HAVE_NUMBA


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.integers(1, 8))
def test_kernel_with_free_is_identity_on_free_rows(seed, rows, cols):
    F = make_field(7)
    rng = np.random.default_rng(seed)
    m = F.random_matrix(rng, rows, cols)
    K, free = F.kernel_with_free(m)
    assert K.shape == (cols, len(free))
    assert F.equal(K[free], F.eye(len(free)))
    assert F.is_zero(F.matmul(m, K))
    # any kernel vector is recovered from its free coordinates
    x = F.matmul(K, F.random_matrix(rng, len(free), 1))
    assert F.equal(F.matmul(K, x[free]), x)
