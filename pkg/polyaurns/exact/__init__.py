"""
Exact matrices: numpy object arrays holding fractions.Fraction entries.

numpy does the indexing, slicing, dot products and reshaping; Fraction
does the arithmetic, so every result is exact.
"""
from fractions import Fraction

import numpy as np


def zero_matrix(rows, cols=None):
    cols = rows if cols is None else cols
    out = np.empty((rows, cols), dtype=object)
    out.fill(Fraction(0))
    return out


def identity_matrix(n):
    """Construct an identity matrix I."""
    out = zero_matrix(n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def unit_matrix(rows, cols, i, j):
    """The rows x cols matrix whose (i, j) entry is 1, all others 0."""
    out = zero_matrix(rows, cols)
    out[i, j] = Fraction(1)
    return out


def fraction_matrix(rows):
    """Coerce nested sequences (ints, Fractions, "p/q" strings) to an exact matrix."""
    rows = [list(row) for row in rows]
    n = len(rows)
    m = len(rows[0]) if rows else 0
    if any(len(row) != m for row in rows):
        raise ValueError("ragged matrix")
    out = zero_matrix(n, m)
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            out[i, j] = Fraction(value)
    return out


def diagonal_matrix(values):
    values = list(values)
    out = zero_matrix(len(values))
    for i, value in enumerate(values):
        out[i, i] = Fraction(value)
    return out


def matmul(A, B):
    if A.shape[1] != B.shape[0]:
        raise ValueError("shape mismatch {0} x {1}".format(A.shape, B.shape))
    if A.shape[1] == 0:
        return zero_matrix(A.shape[0], B.shape[1])
    return A.dot(B)


def matrices_equal(A, B):
    if A.shape != B.shape:
        return False
    return A.size == 0 or bool(np.all(A == B))


def to_float(A):
    return np.array(A, dtype=float).reshape(A.shape)
