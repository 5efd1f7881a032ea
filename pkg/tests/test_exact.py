"""Exact linear algebra: elimination, nullspaces, solves, Gaussian rationals."""

import random
from fractions import Fraction

import numpy as np
import pytest

from kzmono.exact import (QQi, SRMatrix, bareiss_echelon, commutator,
                          invert_rows, nullspace, nullspace_rows, pivot_rows,
                          rank_rows, restrict_operator, solve_rows)


def random_fraction_matrix(rng, n, m, density=0.6):
    rows = []
    for _ in range(n):
        rows.append([Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                     if rng.random() < density else Fraction(0)
                     for _ in range(m)])
    return rows


def test_qqi_field_ops():
    a = QQi(Fraction(1, 2), Fraction(-3, 4))
    b = QQi(2, 1)
    assert a + b == QQi(Fraction(5, 2), Fraction(1, 4))
    assert a * b - b * a == QQi(0)
    assert (a / b) * b == a
    assert complex(QQi(1, 2)) == 1 + 2j
    # floats convert exactly
    z = QQi.from_complex(0.1 + 0.25j)
    assert z.im == Fraction(1, 4)
    assert float(z.re) == 0.1
    with pytest.raises(ZeroDivisionError):
        a / QQi(0)


def test_qqi_interops_with_fraction():
    a = QQi(1, 1)
    assert Fraction(1, 2) * a == QQi(Fraction(1, 2), Fraction(1, 2))
    assert a + Fraction(1) == QQi(2, 1)
    assert 1 - a == QQi(0, -1)


def test_srmatrix_matmul_against_numpy():
    rng = random.Random(7)
    for _ in range(20):
        n, k, m = rng.randint(1, 6), rng.randint(1, 6), rng.randint(1, 6)
        a = random_fraction_matrix(rng, n, k)
        b = random_fraction_matrix(rng, k, m)
        sa = SRMatrix.from_rows(a, k)
        sb = SRMatrix.from_rows(b, m)
        prod = (sa @ sb).to_complex()
        ref = np.array([[float(v) for v in row] for row in a]) @ \
            np.array([[float(v) for v in row] for row in b])
        assert np.allclose(prod, ref)


def test_srmatrix_add_scale_transpose():
    a = SRMatrix.from_rows([[Fraction(1), Fraction(0)],
                            [Fraction(2), Fraction(-1)]])
    b = a.scale(Fraction(1, 2))
    assert (b + b) == a
    assert (a - a).is_zero()
    assert a.transpose().get(0, 1) == Fraction(2)
    assert commutator(a, SRMatrix.identity(2)).is_zero()


def test_bareiss_stays_integral_on_integer_input():
    rows = [[Fraction(v) for v in row] for row in
            [[2, 3, 1], [4, 1, -2], [6, 7, 1]]]
    bareiss_echelon(rows, 3)
    for row in rows:
        for v in row:
            assert Fraction(v).denominator == 1


def test_nullspace_matches_rank_and_annihilates():
    rng = random.Random(3)
    for _ in range(30):
        n, m = rng.randint(1, 7), rng.randint(1, 7)
        rows = random_fraction_matrix(rng, n, m)
        mat = SRMatrix.from_rows(rows, m)
        ns = nullspace(mat)
        assert (mat @ ns).is_zero()
        r = rank_rows([list(row) for row in rows], m)
        assert ns.ncols == m - r
        # numpy cross-check of the rank
        dense = np.array([[float(v) for v in row] for row in rows])
        assert r == np.linalg.matrix_rank(dense)


def test_nullspace_over_gaussian_rationals():
    i = QQi(0, 1)
    rows = [[QQi(1), i, QQi(0)],
            [QQi(2), QQi(0, 2), QQi(0)]]  # second row = 2 * first
    cols = nullspace_rows(rows, 3)
    assert len(cols) == 2
    for col in cols:
        for row in rows:
            s = sum((row[j] * col[j] for j in range(3)), start=QQi(0))
            assert s == QQi(0)


def test_solve_and_invert():
    rng = random.Random(11)
    for _ in range(15):
        n = rng.randint(1, 5)
        while True:
            a = random_fraction_matrix(rng, n, n, density=0.9)
            if rank_rows([list(r) for r in a], n) == n:
                break
        b = random_fraction_matrix(rng, n, 2)
        x = solve_rows([list(r) for r in a], b)
        for i in range(n):
            for j in range(2):
                s = sum(a[i][k] * x[k][j] for k in range(n))
                assert s == b[i][j]
        inv = invert_rows([list(r) for r in a])
        for i in range(n):
            for j in range(n):
                s = sum(a[i][k] * inv[k][j] for k in range(n))
                assert s == Fraction(int(i == j))
    with pytest.raises(ValueError):
        solve_rows([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]],
                   [[Fraction(1)], [Fraction(1)]])


def test_pivot_rows_and_restrict_operator():
    # basis spans an invariant subspace of a block-diagonal operator
    basis = SRMatrix.from_rows([[Fraction(1), Fraction(0)],
                                [Fraction(1), Fraction(1)],
                                [Fraction(0), Fraction(0)]], 2)
    op = SRMatrix.from_rows([[Fraction(2), Fraction(0), Fraction(0)],
                             [Fraction(0), Fraction(2), Fraction(0)],
                             [Fraction(0), Fraction(0), Fraction(5)]], 3)
    rows = pivot_rows(basis)
    assert len(rows) == 2
    x = restrict_operator(op, basis)
    assert x == [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(2)]]
    bad = SRMatrix.from_rows([[Fraction(0), Fraction(0), Fraction(1)],
                              [Fraction(0), Fraction(0), Fraction(0)],
                              [Fraction(1), Fraction(0), Fraction(0)]], 3)
    with pytest.raises(ValueError):
        restrict_operator(bad, basis)
