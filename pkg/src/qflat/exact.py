"""Exact linear algebra over the integers and rationals.

Matrices are immutable tuples of row tuples and vectors are plain tuples.
Entries are Python ints or fractions.Fraction, so nothing here ever rounds.
The module supplies the kernel every higher layer leans on: Smith normal
form with a deterministic pivot rule, canonical Hermite forms for lattice
spans, integral kernels, and an LDL-style rational Cholesky split used by
the vector enumerator.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


class NotPositiveDefinite(ValueError):
    """A symmetric matrix handed to the Cholesky split was not positive definite."""


class SingularMatrix(ValueError):
    """An exact solve or inverse met a singular matrix."""


Matrix = tuple


def freeze(rows) -> Matrix:
    """Validate a rectangular array-of-rows and return it as nested tuples."""
    out = tuple(tuple(r) for r in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged rows")
    return out


def shape(a: Matrix) -> tuple[int, int]:
    return (len(a), len(a[0]) if a else 0)


def identity(n: int, one=1) -> Matrix:
    return tuple(tuple(one if i == j else 0 * one for j in range(n)) for i in range(n))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a: Matrix, v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def scale_matrix(c, a: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def is_symmetric(a: Matrix) -> bool:
    n, m = shape(a)
    return n == m and all(a[i][j] == a[j][i] for i in range(n) for j in range(i))


def is_integral(a: Matrix) -> bool:
    return all(Fraction(x).denominator == 1 for row in a for x in row)


def content(v: Sequence[int]) -> int:
    """gcd of the entries, 0 for the zero vector."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def primitive_part(v: Sequence[int]) -> tuple:
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitive part")
    return tuple(int(x) // g for x in v)


def determinant(a: Matrix):
    """Exact determinant; Bareiss on integer input, Gauss on rationals."""
    n, m = shape(a)
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    if all(isinstance(x, int) for row in a for x in row):
        return _det_bareiss([list(row) for row in a])
    return _det_gauss([[Fraction(x) for x in row] for row in a])


def _det_bareiss(m: list[list[int]]) -> int:
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def _det_gauss(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        inv = 1 / m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] * inv
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return det


def mat_inverse(a: Matrix) -> Matrix:
    """Exact inverse with Fraction entries; raises SingularMatrix."""
    n, m = shape(a)
    if n != m:
        raise ValueError("inverse of a non-square matrix")
    work = [[Fraction(x) for x in row] for row in a]
    inv = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = next((i for i in range(k, n) if work[i][k] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        if piv != k:
            work[k], work[piv] = work[piv], work[k]
            inv[k], inv[piv] = inv[piv], inv[k]
        d = work[k][k]
        work[k] = [x / d for x in work[k]]
        inv[k] = [x / d for x in inv[k]]
        for i in range(n):
            if i != k and work[i][k]:
                f = work[i][k]
                work[i] = [x - f * y for x, y in zip(work[i], work[k])]
                inv[i] = [x - f * y for x, y in zip(inv[i], inv[k])]
    return freeze(inv)


def solve(a: Matrix, b: Sequence) -> tuple:
    """Solve a x = b exactly over the rationals (a square nonsingular)."""
    return mat_vec(mat_inverse(a), tuple(Fraction(x) for x in b))


def charpoly(a: Matrix) -> tuple:
    """Characteristic polynomial of a square matrix, coefficients high to low.

    Returned as Fractions (c0, c1, ..., cn) with c0 = 1, via the
    Faddeev-LeVerrier recursion, so the computation stays exact.
    """
    n, m = shape(a)
    if n != m:
        raise ValueError("charpoly of a non-square matrix")
    af = tuple(tuple(Fraction(x) for x in row) for row in a)
    coeffs = [Fraction(1)]
    mk = identity(n, Fraction(1))
    for k in range(1, n + 1):
        am = mat_mul(af, mk)
        c = -Fraction(sum(am[i][i] for i in range(n)), k)
        coeffs.append(c)
        mk = tuple(
            tuple(am[i][j] + (c if i == j else 0) for j in range(n)) for i in range(n)
        )
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


class SnfResult:
    """Diagonal form s with unimodular u, v satisfying u a v = s.

    The diagonal is nonnegative and each entry divides the next.
    """

    __slots__ = ("s", "u", "v")

    def __init__(self, s: Matrix, u: Matrix, v: Matrix):
        self.s = s
        self.u = u
        self.v = v

    @property
    def diagonal(self) -> tuple[int, ...]:
        r, c = shape(self.s)
        return tuple(self.s[i][i] for i in range(min(r, c)))


def _min_abs_pivot(m, t, rows, cols):
    """Position of the least |nonzero| entry in the trailing block, row-major ties."""
    best = None
    for i in range(t, rows):
        for j in range(t, cols):
            x = m[i][j]
            if x != 0 and (best is None or abs(x) < abs(m[best[0]][best[1]])):
                best = (i, j)
    return best


def smith_normal_form(a: Matrix) -> SnfResult:
    """Smith normal form with transforms.

    Pivots are chosen by least absolute value, ties broken by lowest
    (row, column), which keeps the reduction deterministic. Row operations
    accumulate in u, column operations in v, so u a v equals the returned
    diagonal matrix.
    """
    rows, cols = shape(a)
    m = [[int(x) for x in row] for row in a]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row dst += q * row src
        m[dst] = [x + q * y for x, y in zip(m[dst], m[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for r in m:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    t = 0
    while True:
        pos = _min_abs_pivot(m, t, rows, cols)
        if pos is None:
            break
        if pos != (t, t):
            if pos[0] != t:
                swap_rows(t, pos[0])
            if pos[1] != t:
                swap_cols(t, pos[1])
        while True:
            # clear column t then row t; a nonzero remainder becomes the new pivot
            dirty = False
            for i in range(t + 1, rows):
                if m[i][t] != 0:
                    q = m[i][t] // m[t][t]
                    add_row(i, t, -q)
                    if m[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, cols):
                if m[t][j] != 0:
                    q = m[t][j] // m[t][t]
                    add_col(j, t, -q)
                    if m[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break
        # divisibility fix-up: pivot must divide the trailing block
        piv = m[t][t]
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if m[i][j] % piv != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, 1)
            continue
        if piv < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    return SnfResult(freeze(m), freeze(u), freeze(v))


# ---------------------------------------------------------------------------
# Hermite forms and integral kernels
# ---------------------------------------------------------------------------


def row_hermite_form(a: Matrix) -> Matrix:
    """Canonical row-style Hermite form of the row span of an integer matrix.

    Pivots are positive, entries above a pivot are reduced into [0, pivot),
    and zero rows are dropped; two matrices have equal row spans over the
    integers exactly when their forms coincide.
    """
    rows = [list(map(int, r)) for r in a]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    r = 0
    for j in range(ncols):
        # gcd-reduce the entries of column j below the fixed block
        while True:
            live = [i for i in range(r, nrows) if rows[i][j] != 0]
            if len(live) <= 1:
                break
            live.sort(key=lambda i: (abs(rows[i][j]), i))
            p = live[0]
            for i in live[1:]:
                q = rows[i][j] // rows[p][j]
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[p])]
        live = [i for i in range(r, nrows) if rows[i][j] != 0]
        if not live:
            continue
        p = live[0]
        rows[r], rows[p] = rows[p], rows[r]
        if rows[r][j] < 0:
            rows[r] = [-x for x in rows[r]]
        piv = rows[r][j]
        for i in range(r):
            q = rows[i][j] // piv
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return freeze(rows[:r])


def column_hermite_form(a: Matrix) -> Matrix:
    """Canonical basis (as columns) for the integer span of the columns of a."""
    return transpose(row_hermite_form(transpose(a)))


def kernel_basis_int(a: Matrix) -> Matrix:
    """Columns spanning the integer kernel of an integer matrix.

    The result is primitive: the kernel columns extend to a basis of the
    full integer lattice, because they arrive as unimodular-transform
    columns matched to zero diagonal entries of the Smith form.
    """
    rows, cols = shape(a)
    if rows == 0 or cols == 0:
        return identity(cols)
    res = smith_normal_form(a)
    rank = sum(1 for d in res.diagonal if d != 0)
    vt = transpose(res.v)
    # v columns past the rank are the kernel
    kernel_cols = [vt[j] for j in range(rank, cols)]
    if not kernel_cols:
        return tuple(() for _ in range(cols))
    return transpose(freeze(kernel_cols))


# ---------------------------------------------------------------------------
# Rational Cholesky (LDL-style) split
# ---------------------------------------------------------------------------


def rational_cholesky(g: Matrix) -> tuple[tuple, Matrix]:
    """Split a symmetric positive definite matrix as g = u^T diag(d) u.

    u is unit upper triangular and every entry is an exact Fraction. The
    split underlies the enumerator's coordinate-by-coordinate bounds. A
    nonpositive pivot aborts with NotPositiveDefinite.
    """
    n, m = shape(g)
    if n != m or not is_symmetric(g):
        raise ValueError("cholesky expects a symmetric square matrix")
    w = [[Fraction(g[i][j]) for j in range(n)] for i in range(n)]
    u = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    d = []
    for i in range(n):
        piv = w[i][i]
        if piv <= 0:
            raise NotPositiveDefinite(f"pivot {piv} at index {i}")
        d.append(piv)
        for j in range(i + 1, n):
            u[i][j] = w[i][j] / piv
        for j in range(i + 1, n):
            for k in range(j, n):
                w[j][k] -= w[i][j] * w[i][k] / piv
                w[k][j] = w[j][k]
    return tuple(d), freeze(u)
