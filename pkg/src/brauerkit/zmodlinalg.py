"""Exact dense linear algebra over Z and over Z/n.

Integer matrices are numpy arrays with ``dtype=object`` holding Python ints,
so the unimodular reductions never overflow no matter how the intermediate
entries grow.  Matrices over Z/n are plain int64 arrays with every entry
reduced into ``[0, n)``; the modulus is passed alongside the matrix.  n need
not be prime, which is why row spans are canonicalized with the Howell form
instead of Gaussian elimination.

Everything here is written for small dense matrices (a few dozen rows and
columns at most); no attempt is made at asymptotic cleverness.
"""

from __future__ import annotations

from collections import deque
from math import gcd

import numpy as np

__all__ = [
    "DimensionMismatchError",
    "smith_normal_form",
    "det_int",
    "integer_kernel",
    "howell_form",
    "enumerate_row_span",
    "solve_mod",
]


class DimensionMismatchError(ValueError):
    """Operand shapes do not line up."""


def as_int_matrix(M) -> np.ndarray:
    """Copy ``M`` into a fresh object-dtype array of Python ints."""
    A = np.asarray(M)
    if A.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-d matrix, got shape {A.shape}")
    out = np.empty(A.shape, dtype=object)
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            out[i, j] = int(A[i, j])
    return out


def _identity_obj(n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = s*a + t*b and g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _smallest_nonzero(A: np.ndarray, t: int):
    """Position of a smallest-magnitude nonzero entry of A[t:, t:], or None."""
    best = None
    best_val = None
    for i in range(t, A.shape[0]):
        for j in range(t, A.shape[1]):
            v = A[i, j]
            if v and (best_val is None or abs(v) < best_val):
                best, best_val = (i, j), abs(v)
    return best


def smith_normal_form(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Smith normal form over Z.

    Returns (U, D, V) with U @ M @ V == D, where U and V are unimodular
    (determinant +-1) and D is diagonal with nonnegative entries satisfying
    d1 | d2 | ... along the diagonal.
    """
    A = as_int_matrix(M)
    m, k = A.shape
    U = _identity_obj(m)
    V = _identity_obj(k)
    t = 0
    while t < min(m, k):
        piv = _smallest_nonzero(A, t)
        if piv is None:
            break
        i, j = piv
        if i != t:
            A[[t, i]] = A[[i, t]]
            U[[t, i]] = U[[i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            V[:, [t, j]] = V[:, [j, t]]
        while True:
            for i in range(t + 1, m):
                b = int(A[i, t])
                if not b:
                    continue
                a = int(A[t, t])
                if b % a == 0:
                    # plain elimination keeps the pivot row intact, so a
                    # clean pass stays clean and the loop can terminate
                    q = b // a
                    A[i, :] = A[i, :] - q * A[t, :]
                    U[i, :] = U[i, :] - q * U[t, :]
                    continue
                g, s, u = _xgcd(a, b)
                row_t = s * A[t, :] + u * A[i, :]
                row_i = (-(b // g)) * A[t, :] + (a // g) * A[i, :]
                A[t, :], A[i, :] = row_t, row_i
                urow_t = s * U[t, :] + u * U[i, :]
                urow_i = (-(b // g)) * U[t, :] + (a // g) * U[i, :]
                U[t, :], U[i, :] = urow_t, urow_i
            for j in range(t + 1, k):
                b = int(A[t, j])
                if not b:
                    continue
                a = int(A[t, t])
                if b % a == 0:
                    q = b // a
                    A[:, j] = A[:, j] - q * A[:, t]
                    V[:, j] = V[:, j] - q * V[:, t]
                    continue
                g, s, u = _xgcd(a, b)
                col_t = s * A[:, t] + u * A[:, j]
                col_j = (-(b // g)) * A[:, t] + (a // g) * A[:, j]
                A[:, t], A[:, j] = col_t, col_j
                vcol_t = s * V[:, t] + u * V[:, j]
                vcol_j = (-(b // g)) * V[:, t] + (a // g) * V[:, j]
                V[:, t], V[:, j] = vcol_t, vcol_j
            if A[t + 1 :, t].any() or A[t, t + 1 :].any():
                continue
            bad = _find_nondivisible(A, t)
            if bad is None:
                break
            # fold an offending row into the pivot row so the next gcd pass
            # strictly shrinks the pivot
            A[t, :] = A[t, :] + A[bad, :]
            U[t, :] = U[t, :] + U[bad, :]
        t += 1
    for i in range(min(m, k)):
        if A[i, i] < 0:
            A[i, :] = -A[i, :]
            U[i, :] = -U[i, :]
    return U, A, V


def _find_nondivisible(A: np.ndarray, t: int):
    d = int(A[t, t])
    for i in range(t + 1, A.shape[0]):
        for j in range(t + 1, A.shape[1]):
            if A[i, j] % d:
                return i
    return None


def det_int(M) -> int:
    """Exact integer determinant via Bareiss fraction-free elimination."""
    A = as_int_matrix(M)
    n, nc = A.shape
    if n != nc:
        raise DimensionMismatchError(f"determinant of a {n}x{nc} matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for c in range(n - 1):
        if A[c, c] == 0:
            for i in range(c + 1, n):
                if A[i, c]:
                    A[[c, i]] = A[[i, c]]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                A[i, j] = (A[i, j] * A[c, c] - A[i, c] * A[c, j]) // prev
            A[i, c] = 0
        prev = A[c, c]
    return sign * int(A[n - 1, n - 1])


def integer_kernel(M) -> np.ndarray:
    """Rows form a lattice basis of {x in Z^cols : M @ x = 0}."""
    A = as_int_matrix(M)
    m, k = A.shape
    _, D, V = smith_normal_form(A)
    keep = [j for j in range(k) if j >= min(m, k) or D[j, j] == 0]
    if not keep:
        return np.empty((0, k), dtype=object)
    return V[:, keep].T.copy()


# ---------------------------------------------------------------------------
# Z/n


def _leading(row: np.ndarray) -> int:
    nz = np.flatnonzero(row)
    return int(nz[0])


def _echelon(rows, n: int) -> dict[int, np.ndarray]:
    """Gcd-based row echelon over Z/n, keyed by pivot column.

    Only leading entries are eliminated; entries above pivots are cleaned up
    later.  Span is preserved: every update is a unimodular 2x2 transform.
    """
    piv: dict[int, np.ndarray] = {}
    queue = deque(np.asarray(r, dtype=np.int64) % n for r in rows)
    while queue:
        r = queue.popleft()
        while True:
            nz = np.flatnonzero(r)
            if nz.size == 0:
                break
            c = int(nz[0])
            if c not in piv:
                piv[c] = r
                break
            p = piv[c]
            a, b = int(p[c]), int(r[c])
            g, s, u = _xgcd(a, b)
            new_p = (s * p + u * r) % n
            r = ((a // g) * r - (b // g) * p) % n
            piv[c] = new_p
    return piv


def _piv_equal(x: dict[int, np.ndarray], y: dict[int, np.ndarray]) -> bool:
    return x.keys() == y.keys() and all(np.array_equal(x[c], y[c]) for c in x)


def _unit_multiplier(a: int, n: int) -> int:
    """A unit u mod n with u*a == gcd(a, n) (mod n).

    Needs 0 < a < n.  Exists because a/g is coprime to n/g; the inverse mod
    n/g is lifted to a unit mod n by stepping in multiples of n/g.
    """
    g = gcd(a, n)
    n1 = n // g
    u = pow((a // g) % n1, -1, n1)
    while gcd(u, n) != 1:
        u += n1
    return u % n


def howell_form(A, n: int) -> np.ndarray:
    """Canonical Howell form of the row span of ``A`` over Z/n.

    Two matrices over Z/n generate the same row span iff their Howell forms
    are identical, composite n included.  The result has strictly increasing
    pivot columns, every pivot divides n, and entries above a pivot are
    reduced modulo it.  A span of size s in (Z/n)^k comes out with pivots
    p_i such that s = prod(n // p_i).
    """
    if n < 2:
        raise ValueError("modulus must be >= 2")
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-d matrix, got shape {A.shape}")
    A = A % n
    m, k = A.shape
    piv = _echelon([A[i] for i in range(m)], n)
    guard = 0
    while True:
        rows = [piv[c] for c in sorted(piv)]
        extra = []
        for row in rows:
            c = _leading(row)
            q = n // gcd(int(row[c]), n)
            w = (q * row) % n
            if w.any():
                extra.append(w)
        if not extra:
            break
        new = _echelon(rows + extra, n)
        if _piv_equal(new, piv):
            break
        piv = new
        guard += 1
        if guard > 4 * (k + 2) * n.bit_length():
            raise RuntimeError("howell reduction failed to stabilize")
    cols = sorted(piv)
    H = [piv[c].copy() for c in cols]
    for idx, c in enumerate(cols):
        p = int(H[idx][c])
        g = gcd(p, n)
        if p != g:
            H[idx] = (_unit_multiplier(p, n) * H[idx]) % n
    for idx, c in enumerate(cols):
        p = int(H[idx][c])
        for above in range(idx):
            f = int(H[above][c]) // p
            if f:
                H[above] = (H[above] - f * H[idx]) % n
    if not H:
        return np.zeros((0, k), dtype=np.int64)
    return np.vstack(H)


def enumerate_row_span(A, n: int, cap: int = 1_000_000) -> set[tuple[int, ...]]:
    """The full row span of ``A`` over Z/n as a set of coordinate tuples.

    Brute force by construction; useful as an oracle against howell_form.
    """
    A = np.asarray(A, dtype=np.int64) % n
    if A.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-d matrix, got shape {A.shape}")
    k = A.shape[1]
    span: set[tuple[int, ...]] = {tuple([0] * k)}
    for row in A:
        new: set[tuple[int, ...]] = set()
        for v in span:
            base = np.array(v, dtype=np.int64)
            for c in range(n):
                new.add(tuple(((base + c * row) % n).tolist()))
        span = new
        if len(span) > cap:
            raise RuntimeError(f"row span exceeds {cap} elements")
    return span


def solve_mod(A, c, n: int):
    """Solve A @ x == c over Z/n.

    Returns ``(particular, kernel)`` where ``kernel`` rows generate the full
    homogeneous solution set {x : A @ x == 0 mod n}, or ``None`` when the
    system has no solution.  Works for any n >= 2 via the integer Smith form
    of A: with U A V = D the system splits into d_i z_i == (U c)_i mod n.
    """
    if n < 2:
        raise ValueError("modulus must be >= 2")
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-d matrix, got shape {A.shape}")
    m, k = A.shape
    cvec = [int(v) for v in np.asarray(c).ravel()]
    if len(cvec) != m:
        raise DimensionMismatchError(f"rhs has length {len(cvec)}, matrix has {m} rows")
    U, D, V = smith_normal_form(A % n)
    r_diag = min(m, k)
    b = [int(sum(U[i, j] * cvec[j] for j in range(m))) % n for i in range(m)]
    z = [0] * k
    for i in range(m):
        d = int(D[i, i]) if i < r_diag else 0
        g = gcd(d, n)
        if b[i] % g:
            return None
        if i < k:
            n1 = n // g
            if n1 > 1:
                z[i] = ((b[i] // g) * pow((d // g) % n1, -1, n1)) % n1
    x = np.array(
        [int(sum(V[i, j] * z[j] for j in range(k))) % n for i in range(k)],
        dtype=np.int64,
    )
    kern = []
    for j in range(k):
        d = int(D[j, j]) if j < r_diag else 0
        q = n // gcd(d, n)
        w = np.array([(q * int(V[i, j])) % n for i in range(k)], dtype=np.int64)
        if w.any():
            kern.append(w)
    kernel = np.vstack(kern) if kern else np.zeros((0, k), dtype=np.int64)
    return x, kernel
