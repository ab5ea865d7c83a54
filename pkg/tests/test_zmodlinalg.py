import numpy as np
import pytest

from brute import span_closure
from brauerkit.zmodlinalg import (
    DimensionMismatchError,
    det_int,
    enumerate_row_span,
    howell_form,
    integer_kernel,
    smith_normal_form,
    solve_mod,
)


def check_smith(M):
    M = np.asarray(M, dtype=object)
    U, D, V = smith_normal_form(M)
    assert np.array_equal(U @ M @ V, D)
    m, k = M.shape
    diag = [int(D[i, i]) for i in range(min(m, k))]
    for i in range(m):
        for j in range(k):
            if i != j:
                assert D[i, j] == 0
    for a, b in zip(diag, diag[1:]):
        assert a >= 0 and b >= 0
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0
    assert abs(det_int(U)) == 1
    assert abs(det_int(V)) == 1
    return diag


def test_smith_identity():
    U, D, V = smith_normal_form(np.eye(2, dtype=int))
    assert np.array_equal(D, np.eye(2, dtype=object))
    assert np.array_equal(U, np.eye(2, dtype=object))
    assert np.array_equal(V, np.eye(2, dtype=object))


def test_smith_frozen_2x2():
    # gcd of entries is 2 and |det| = 8, so the diagonal must be (2, 4)
    diag = check_smith([[2, 4], [6, 8]])
    assert diag == [2, 4]


def test_smith_zero_matrix():
    U, D, V = smith_normal_form(np.zeros((2, 3), dtype=int))
    assert not D.any()
    assert np.array_equal(U, np.eye(2, dtype=object))
    assert np.array_equal(V, np.eye(3, dtype=object))


def test_smith_divisibility_needs_folding():
    # diag(2, 3) is not in normal form; the chain forces (1, 6)
    assert check_smith([[2, 0], [0, 3]]) == [1, 6]
    assert check_smith([[6, 0, 0], [0, 10, 0], [0, 0, 15]]) == [1, 30, 30]


def test_smith_rectangular_and_random():
    rng = np.random.default_rng(7)
    for _ in range(300):
        m = int(rng.integers(1, 7))
        k = int(rng.integers(1, 7))
        check_smith(rng.integers(-50, 51, size=(m, k)))


def test_smith_rejects_non_matrix():
    with pytest.raises(DimensionMismatchError):
        smith_normal_form(np.zeros(3, dtype=int))


def brute_det(M):
    M = [list(map(int, row)) for row in M]
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        total += (-1) ** j * M[0][j] * brute_det(minor)
    return total


def test_det_matches_cofactor_expansion():
    rng = np.random.default_rng(11)
    for _ in range(60):
        n = int(rng.integers(1, 5))
        M = rng.integers(-9, 10, size=(n, n))
        assert det_int(M) == brute_det(M)


def test_det_singular():
    assert det_int([[1, 2], [2, 4]]) == 0


def test_integer_kernel_annihilates_and_spans():
    M = np.array([[1, 2, 3]], dtype=object)
    K = integer_kernel(M)
    assert K.shape == (2, 3)
    assert not (M @ K.T).any()
    # basis rows of a saturated lattice have content 1
    from math import gcd
    for row in K:
        assert gcd(gcd(int(row[0]), int(row[1])), int(row[2])) == 1

    assert integer_kernel([[2, 4], [6, 8]]).shape == (0, 2)
    K2 = integer_kernel([[2, 4]])
    assert K2.shape == (1, 2)
    assert 2 * K2[0, 0] + 4 * K2[0, 1] == 0


def test_howell_single_row_already_canonical():
    assert howell_form([[2]], 4).tolist() == [[2]]


def test_howell_frozen_z4():
    H1 = howell_form([[2, 0], [0, 2], [1, 1]], 4)
    H2 = howell_form([[1, 1], [0, 2]], 4)
    assert H1.tolist() == H2.tolist() == [[1, 1], [0, 2]]
    assert enumerate_row_span(H1, 4) == enumerate_row_span([[2, 0], [0, 2], [1, 1]], 4)


def test_howell_prime_modulus_is_rref():
    M = [[1, 2, 0], [0, 1, 1], [1, 0, 2]]
    H = howell_form(M, 5)
    # full rank over a field: identity staircase with 1-pivots
    assert H.tolist() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_howell_annihilator_rows_are_generated():
    # (2) over Z/4 annihilates to (0, 2): the span of row (1, 3) over Z/4
    # contains (2, 2) but also needs (0, 2) to be closed under the
    # weak "leading coefficient" structure
    H = howell_form([[2, 1]], 4)
    assert enumerate_row_span(H, 4) == enumerate_row_span([[2, 1]], 4)
    assert H.shape[0] == 2  # the annihilator contributes a second row


def test_howell_empty_and_zero():
    assert howell_form(np.zeros((0, 3), dtype=int), 6).shape == (0, 3)
    assert howell_form(np.zeros((2, 3), dtype=int), 6).shape == (0, 3)


def test_howell_canonical_for_span():
    rng = np.random.default_rng(3)
    for n in (2, 3, 4, 6, 8):
        for _ in range(30):
            rows = int(rng.integers(1, 4))
            cols = int(rng.integers(1, 5))
            M = rng.integers(0, n, size=(rows, cols))
            H = howell_form(M, n)
            base = span_closure(M, n)
            assert base == span_closure(H, n)
            assert base == enumerate_row_span(M, n)
            assert np.array_equal(howell_form(H, n), H)
            # any other generating set of the same span canonicalizes equally
            extra = sorted(base)[int(rng.integers(0, len(base)))]
            M2 = np.vstack([M[::-1], np.asarray(extra, dtype=np.int64)])
            assert np.array_equal(howell_form(M2, n), H)


def test_howell_distinct_spans_distinct_forms():
    seen = {}
    rng = np.random.default_rng(5)
    for _ in range(120):
        M = rng.integers(0, 6, size=(2, 3))
        key = frozenset(span_closure(M, 6))
        form = howell_form(M, 6).tobytes()
        if key in seen:
            assert seen[key] == form
        seen[key] = form
    forms = {}
    for key, form in seen.items():
        assert forms.setdefault(form, key) == key


def test_enumerate_row_span_cap():
    with pytest.raises(RuntimeError):
        enumerate_row_span(np.eye(4, dtype=int), 8, cap=100)


def test_solve_mod_frozen_z4():
    assert solve_mod([[2]], [1], 4) is None
    x, kernel = solve_mod([[2]], [2], 4)
    assert (2 * int(x[0])) % 4 == 2
    assert enumerate_row_span(kernel, 4) == {(0,), (2,)}


def test_solve_mod_inconsistent_zero_row():
    assert solve_mod([[0, 0]], [3], 6) is None
    x, kernel = solve_mod([[0, 0]], [0], 6)
    assert len(enumerate_row_span(kernel, 6)) == 36


def test_solve_mod_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        solve_mod([[1, 2]], [1, 2], 4)


def test_solve_mod_exhaustive_z6():
    rng = np.random.default_rng(17)
    n = 6
    for _ in range(25):
        m = int(rng.integers(1, 4))
        k = int(rng.integers(1, 6))
        A = rng.integers(0, n, size=(m, k))
        c = rng.integers(0, n, size=m)
        brute = set()
        for x in np.ndindex(*([n] * k)):
            xv = np.array(x, dtype=np.int64)
            if not ((A @ xv - c) % n).any():
                brute.add(x)
        res = solve_mod(A, c, n)
        if res is None:
            assert not brute
            continue
        x0, kernel = res
        assert tuple(int(v) for v in x0) in brute
        coset = {
            tuple((np.array(v) + x0) % n) for v in enumerate_row_span(kernel, n)
        }
        assert {tuple(int(c_) for c_ in v) for v in coset} == brute
        # solution count equals kernel size
        assert len(brute) == len(enumerate_row_span(kernel, n))
