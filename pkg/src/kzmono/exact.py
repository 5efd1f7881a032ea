"""Exact sparse linear algebra over the rationals and Gaussian rationals.

Matrices are dict-of-keys sparse with `Fraction` (or `QQi`) entries; all
elimination is fraction-free (Bareiss) after clearing row denominators, so
intermediate entries stay integral and coefficient growth stays polynomial.
Floating point never enters this module.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np

_ZERO = Fraction(0)


class QQi:
    """Gaussian rational re + im*i with exact Fraction parts.

    Floats convert exactly (every float is a dyadic rational), so complex
    input points never lose information on the way into the exact layer.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    @classmethod
    def from_complex(cls, z):
        if isinstance(z, QQi):
            return z
        if isinstance(z, complex):
            return cls(Fraction(z.real), Fraction(z.imag))
        return cls(Fraction(z))

    def __add__(self, other):
        other = _coerce_qqi(other)
        if other is NotImplemented:
            return NotImplemented
        return QQi(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_qqi(other)
        if other is NotImplemented:
            return NotImplemented
        return QQi(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce_qqi(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce_qqi(other)
        if other is NotImplemented:
            return NotImplemented
        return QQi(self.re * other.re - self.im * other.im,
                   self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_qqi(other)
        if other is NotImplemented:
            return NotImplemented
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QQi((self.re * other.re + self.im * other.im) / n,
                   (self.im * other.re - self.re * other.im) / n)

    def __rtruediv__(self, other):
        other = _coerce_qqi(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def conjugate(self):
        return QQi(self.re, -self.im)

    def __eq__(self, other):
        other = _coerce_qqi(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QQi({self.re!r}, {self.im!r})"


def _coerce_qqi(x):
    if isinstance(x, QQi):
        return x
    if isinstance(x, (int, Fraction)):
        return QQi(x)
    if isinstance(x, complex):
        return QQi.from_complex(x)
    return NotImplemented


class SRMatrix:
    """Sparse matrix with exact entries, dict-of-keys storage.

    Entries are Fraction or QQi (one field per matrix); zeros are never
    stored. Shapes are explicit because all-zero matrices are common.
    """

    __slots__ = ("nrows", "ncols", "data")

    def __init__(self, nrows, ncols, data=None):
        self.nrows = nrows
        self.ncols = ncols
        self.data = {} if data is None else data

    @classmethod
    def identity(cls, n, one=None):
        one = Fraction(1) if one is None else one
        return cls(n, n, {(i, i): one for i in range(n)})

    @classmethod
    def from_rows(cls, rows, ncols=None):
        nrows = len(rows)
        ncols = len(rows[0]) if ncols is None and rows else (ncols or 0)
        data = {}
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    data[(i, j)] = v
        return cls(nrows, ncols, data)

    @property
    def nnz(self):
        return len(self.data)

    def get(self, i, j):
        return self.data.get((i, j), _ZERO)

    def put(self, i, j, v):
        if v:
            self.data[(i, j)] = v
        else:
            self.data.pop((i, j), None)

    def add_at(self, i, j, v):
        if not v:
            return
        cur = self.data.get((i, j))
        new = v if cur is None else cur + v
        if new:
            self.data[(i, j)] = new
        else:
            del self.data[(i, j)]

    def copy(self):
        return SRMatrix(self.nrows, self.ncols, dict(self.data))

    def is_zero(self):
        return not self.data

    def __eq__(self, other):
        if not isinstance(other, SRMatrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) \
            and self.data == other.data

    def __add__(self, other):
        self._check_shape(other)
        out = dict(self.data)
        res = SRMatrix(self.nrows, self.ncols, out)
        for k, v in other.data.items():
            res.add_at(k[0], k[1], v)
        return res

    def __sub__(self, other):
        self._check_shape(other)
        out = dict(self.data)
        res = SRMatrix(self.nrows, self.ncols, out)
        for k, v in other.data.items():
            res.add_at(k[0], k[1], -v)
        return res

    def __neg__(self):
        return SRMatrix(self.nrows, self.ncols,
                        {k: -v for k, v in self.data.items()})

    def scale(self, c):
        if not c:
            return SRMatrix(self.nrows, self.ncols)
        return SRMatrix(self.nrows, self.ncols,
                        {k: c * v for k, v in self.data.items()})

    def __matmul__(self, other):
        self._check_inner(other)
        rows_of_other = {}
        for (r, c), v in other.data.items():
            rows_of_other.setdefault(r, []).append((c, v))
        res = SRMatrix(self.nrows, other.ncols)
        for (i, k), a in self.data.items():
            hits = rows_of_other.get(k)
            if hits is None:
                continue
            for j, b in hits:
                res.add_at(i, j, a * b)
        return res

    def transpose(self):
        return SRMatrix(self.ncols, self.nrows,
                        {(c, r): v for (r, c), v in self.data.items()})

    def map_values(self, fn):
        return SRMatrix(self.nrows, self.ncols,
                        {k: fn(v) for k, v in self.data.items()})

    def entries(self):
        """Deterministic (row, col, value) iteration, sorted by position."""
        for (r, c) in sorted(self.data):
            yield r, c, self.data[(r, c)]

    def rows_with_support(self):
        return sorted({r for (r, _c) in self.data})

    def column(self, j):
        return {r: v for (r, c), v in self.data.items() if c == j}

    def columns_index(self):
        cols = {}
        for (r, c), v in self.data.items():
            cols.setdefault(c, []).append((r, v))
        return cols

    def max_abs(self):
        """Largest |entry| as a Fraction (|re| + |im| for Gaussian values)."""
        best = Fraction(0)
        for v in self.data.values():
            size = abs(v.re) + abs(v.im) if isinstance(v, QQi) else abs(v)
            if size > best:
                best = size
        return best

    def to_rows(self):
        one = next(iter(self.data.values()), None)
        zero = QQi(0) if isinstance(one, QQi) else Fraction(0)
        rows = [[zero] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.data.items():
            rows[r][c] = v
        return rows

    def to_complex(self):
        out = np.zeros((self.nrows, self.ncols), dtype=complex)
        for (r, c) in sorted(self.data):
            out[r, c] = complex(self.data[(r, c)])
        return out

    def submatrix_rows(self, rows):
        index = {r: i for i, r in enumerate(rows)}
        data = {}
        for (r, c), v in self.data.items():
            i = index.get(r)
            if i is not None:
                data[(i, c)] = v
        return SRMatrix(len(rows), self.ncols, data)

    def _check_shape(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError(f"shape mismatch: {(self.nrows, self.ncols)} "
                             f"vs {(other.nrows, other.ncols)}")

    def _check_inner(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"inner dimension mismatch: {self.ncols} "
                             f"vs {other.nrows}")

    def __repr__(self):
        return f"SRMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


def commutator(a, b):
    return a @ b - b @ a


def _row_denominator_lcm(row):
    d = 1
    for v in row:
        if isinstance(v, QQi):
            if v.re:
                d = lcm(d, v.re.denominator)
            if v.im:
                d = lcm(d, v.im.denominator)
        elif v:
            d = lcm(d, v.denominator)
    return d


def _clear_denominators(rows):
    out = []
    for row in rows:
        d = _row_denominator_lcm(row)
        out.append([v * d for v in row] if d != 1 else list(row))
    return out


def bareiss_echelon(rows, ncols, width=None):
    """Fraction-free row echelon form, in place.

    Pivots are searched in the first `ncols` columns; the update runs out to
    `width` (defaults to ncols) so augmented systems eliminate correctly.
    Returns the list of pivot (row, col) pairs. Every division in the Bareiss
    update is exact, so integral input stays integral.
    """
    nrows = len(rows)
    width = ncols if width is None else width
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        rr = rows[r]
        for i in range(r + 1, nrows):
            ri = rows[i]
            head = ri[c]
            if head:
                for j in range(c + 1, width):
                    ri[j] = (piv * ri[j] - head * rr[j]) / prev
                ri[c] = 0
            elif prev != piv:
                for j in range(c + 1, width):
                    if ri[j]:
                        ri[j] = (piv * ri[j]) / prev
        pivots.append((r, c))
        prev = piv
        r += 1
        if r == nrows:
            break
    return pivots


def nullspace_rows(rows, ncols):
    """Right nullspace basis of the matrix given as dense rows.

    Returns a list of columns (each a list of length ncols). Each basis
    vector has a single free coordinate set to 1; the result is exact.
    """
    work = _clear_denominators(rows)
    pivots = bareiss_echelon(work, ncols)
    pivot_cols = [c for (_r, c) in pivots]
    pivot_set = set(pivot_cols)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    one = Fraction(1)
    for fc in free_cols:
        x = [Fraction(0)] * ncols
        x[fc] = one
        for (r, c) in reversed(pivots):
            s = sum((work[r][j] * x[j] for j in range(c + 1, ncols) if x[j]),
                    start=Fraction(0))
            x[c] = -s / work[r][c]
        basis.append(x)
    return basis


def nullspace(mat):
    """Nullspace of a sparse matrix; returns columns as an SRMatrix.

    Zero rows carry no information and are dropped before elimination.
    """
    support = mat.rows_with_support()
    rows = mat.submatrix_rows(support).to_rows()
    cols = nullspace_rows(rows, mat.ncols)
    out = SRMatrix(mat.ncols, len(cols))
    for j, col in enumerate(cols):
        for i, v in enumerate(col):
            if v:
                out.data[(i, j)] = v
    return out


def rank_rows(rows, ncols):
    work = _clear_denominators(rows)
    return len(bareiss_echelon(work, ncols))


def solve_rows(a_rows, b_rows):
    """Solve A X = B for square nonsingular A, all dense rows, exactly."""
    n = len(a_rows)
    m = len(b_rows[0]) if b_rows else 0
    aug = [list(a_rows[i]) + list(b_rows[i]) for i in range(n)]
    aug = _clear_denominators(aug)
    pivots = bareiss_echelon(aug, n, width=n + m)
    if len(pivots) != n:
        raise ValueError("singular system")
    x = [[None] * m for _ in range(n)]
    for (r, c) in reversed(pivots):
        for j in range(m):
            s = aug[r][n + j]
            for c2 in range(c + 1, n):
                if aug[r][c2] and x[c2][j]:
                    s = s - aug[r][c2] * x[c2][j]
            x[c][j] = s / aug[r][c]
    return x


def invert_rows(a_rows):
    n = len(a_rows)
    eye = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return solve_rows(a_rows, eye)


def pivot_rows(mat):
    """Row indices R such that mat[R, :] is square nonsingular.

    Requires mat to have full column rank; elimination runs on the transpose
    so the pivot columns found there are the wanted rows.
    """
    support = mat.rows_with_support()
    sub = mat.submatrix_rows(support)
    rows_t = sub.transpose().to_rows()
    work = _clear_denominators(rows_t)
    pivots = bareiss_echelon(work, len(support))
    if len(pivots) != mat.ncols:
        raise ValueError("matrix does not have full column rank")
    return [support[c] for (_r, c) in pivots]


def restrict_operator(op, basis, rows=None):
    """Matrix of `op` on the column span of `basis`, as dense exact rows.

    Solves op @ basis == basis @ X using a nonsingular row selection, then
    verifies the identity exactly; failure means the span is not invariant.
    """
    if rows is None:
        rows = pivot_rows(basis)
    lhs = basis.submatrix_rows(rows).to_rows()
    image = op @ basis
    rhs = image.submatrix_rows(rows).to_rows()
    x = solve_rows(lhs, rhs)
    xs = SRMatrix.from_rows(x, basis.ncols)
    if basis @ xs != image:
        raise ValueError("operator does not preserve the subspace")
    return x
