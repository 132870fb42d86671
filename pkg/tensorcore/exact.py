"""Exact linear algebra over QQ on top of sympy's DomainMatrix."""

from fractions import Fraction

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from tensorcore.errors import DimensionError


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    return Fraction(x)


def fraction_matrix(rows) -> np.ndarray:
    """Object array of Fractions; accepts nested lists, numpy arrays, ints and Fractions."""
    arr = np.asarray(rows, dtype=object)
    if arr.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {arr.shape}")
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = to_fraction(x)
    return out


def _domain_matrix(m: np.ndarray) -> DomainMatrix:
    rows = [[QQ(int(x.numerator), int(x.denominator)) for x in row] for row in m]
    return DomainMatrix(rows, m.shape, QQ)


def _from_sympy(entry) -> Fraction:
    return Fraction(int(entry.p), int(entry.q))


def rref(m) -> tuple:
    """Reduced row echelon form and pivot columns."""
    m = fraction_matrix(m)
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return m, ()
    reduced, pivots = _domain_matrix(m).rref()
    sm = reduced.to_Matrix()
    out = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            out[i, j] = _from_sympy(sm[i, j])
    return out, tuple(pivots)


def rank(m) -> int:
    m = fraction_matrix(m)
    if 0 in m.shape:
        return 0
    return int(_domain_matrix(m).rank())


def nullspace(m) -> list:
    """Basis of {x : m x = 0} as a list of Fraction vectors."""
    m = fraction_matrix(m)
    cols = m.shape[1]
    reduced, pivots = rref(m)
    basis = []
    for free in (j for j in range(cols) if j not in pivots):
        v = np.array([Fraction(0)] * cols, dtype=object)
        v[free] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -reduced[row, free]
        basis.append(v)
    return basis


def column_space(m) -> list:
    """Basis of the column space: the pivot columns of m."""
    m = fraction_matrix(m)
    _, pivots = rref(m)
    return [m[:, j].copy() for j in pivots]


def columns_matrix(vectors, rows: int) -> np.ndarray:
    """Stack vectors as columns; an empty list gives a (rows x 0) matrix."""
    if not vectors:
        return np.empty((rows, 0), dtype=object)
    return np.column_stack(vectors).astype(object)


def solve(a, b) -> np.ndarray:
    """One exact solution x of a x = b (b a vector or a matrix); raises on inconsistency."""
    a = fraction_matrix(a)
    b_arr = np.asarray(b, dtype=object)
    vector_rhs = b_arr.ndim == 1
    b_mat = fraction_matrix(b_arr.reshape(-1, 1) if vector_rhs else b_arr)
    rows, cols = a.shape
    if b_mat.shape[0] != rows:
        raise DimensionError(f"right-hand side has {b_mat.shape[0]} rows, matrix has {rows}")
    reduced, pivots = rref(np.hstack([a, b_mat]))
    if any(p >= cols for p in pivots):
        raise DimensionError("linear system is inconsistent")
    x = np.array([[Fraction(0)] * b_mat.shape[1] for _ in range(cols)], dtype=object)
    for row, pc in enumerate(pivots):
        x[pc, :] = reduced[row, cols:]
    return x[:, 0] if vector_rhs else x


def is_zero_matrix(m) -> bool:
    return all(x == 0 for x in np.asarray(m, dtype=object).flat)
