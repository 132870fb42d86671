"""
Finite-dimensional Lie algebras given by rational structure constants.

Convention: [e_i, e_j] = sum_k c[i][j][k] e_k, and catalog algebras carry a
faithful matrix basis with X_i X_j - X_j X_i = sum_k c[i][j][k] X_k.
"""

import itertools
import logging
from fractions import Fraction

import numpy as np

from tensorcore.errors import DimensionError, StructureError
from tensorcore.exact import fraction_matrix, solve

LOGGER = logging.getLogger(__name__)

CATALOG_NAMES = ("su2", "so3", "sl2", "heis3", "abelian:n", "ut:n")


class LieAlgebra:
    """Structure constants c[i][j][k] (Fractions), labels and an optional matrix basis."""

    def __init__(self, name: str, constants, labels=None, matrices=None):
        c = np.asarray(constants, dtype=object)
        n = c.shape[0] if c.size else 0
        if c.shape != (n, n, n):
            raise DimensionError(f"structure constants of shape {c.shape}")
        self.name = name
        self.n = n
        self.c = np.empty((n, n, n), dtype=object)
        for idx, x in np.ndenumerate(c):
            self.c[idx] = Fraction(x)
        self.labels = list(labels) if labels else [f"e{i + 1}" for i in range(n)]
        self.matrices = [fraction_matrix(m) for m in matrices] if matrices is not None else None
        self._coords = None
        self.check()

    def check(self):
        """Antisymmetry and Jacobi, exactly."""
        n, c = self.n, self.c
        for i, j in itertools.product(range(n), repeat=2):
            for k in range(n):
                if c[i, j, k] != -c[j, i, k]:
                    raise StructureError(f"{self.name}: c[{i}][{j}][{k}] is not antisymmetric")
        for i, j, k in itertools.combinations(range(n), 3):
            for m in range(n):
                total = sum(
                    c[a, b, l] * c[l, d, m]
                    for a, b, d in ((i, j, k), (j, k, i), (k, i, j))
                    for l in range(n)
                )
                if total != 0:
                    raise StructureError(f"{self.name}: Jacobi fails on ({i}, {j}, {k})")

    def bracket(self, u, v) -> np.ndarray:
        """[u, v] for coefficient vectors u, v."""
        out = np.zeros(self.n, dtype=object)
        for i, j in itertools.product(range(self.n), repeat=2):
            if u[i] != 0 and v[j] != 0:
                out = out + u[i] * v[j] * self.c[i, j, :]
        return out

    def ad(self, i: int) -> np.ndarray:
        """Matrix of ad_{e_i}: (ad_i)[k, j] = c[i][j][k]."""
        return self.c[i, :, :].T.copy()

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.array([Fraction(0)] * self.n, dtype=object)
        v[i] = Fraction(1)
        return v

    def element_matrix(self, u) -> np.ndarray:
        """sum_i u_i X_i in the matrix basis (u may hold jets)."""
        if self.matrices is None:
            raise StructureError(f"{self.name} has no matrix basis")
        out = np.zeros(self.matrices[0].shape, dtype=object)
        for ui, x in zip(u, self.matrices):
            if not (isinstance(ui, (int, float, Fraction)) and ui == 0):
                out = out + ui * x.astype(float)
        return out

    def coords(self, x) -> np.ndarray:
        """Coordinates of a matrix in the span of the matrix basis (least squares, works on jets)."""
        if self._coords is None:
            flat = np.column_stack([m.astype(float).reshape(-1) for m in self.matrices])
            self._coords = np.linalg.pinv(flat)
        return self._coords @ np.asarray(x, dtype=object).reshape(-1)

    def __repr__(self):
        return f"LieAlgebra({self.name!r}, n={self.n})"


def _commutator(a, b):
    return a @ b - b @ a


def structure_constants_from_matrices(matrices) -> np.ndarray:
    """Recover c[i][j][k] from a linearly independent matrix basis by an exact solve."""
    mats = [fraction_matrix(m) for m in matrices]
    n = len(mats)
    basis = np.column_stack([m.reshape(-1) for m in mats]) if n else np.empty((0, 0), dtype=object)
    c = np.empty((n, n, n), dtype=object)
    for i, j in itertools.product(range(n), repeat=2):
        try:
            c[i, j, :] = solve(basis, _commutator(mats[i], mats[j]).reshape(-1))
        except DimensionError:
            raise StructureError(f"matrices not closed under bracket at ({i}, {j})")
    return c


def _unit(size, i, j) -> np.ndarray:
    m = np.array([[Fraction(0)] * size for _ in range(size)], dtype=object)
    m[i, j] = Fraction(1)
    return m


def quaternion_left(a, b, c, d) -> np.ndarray:
    """Matrix of left multiplication by a + b i + c j + d k on R^4 = H."""
    return np.array([
        [a, -b, -c, -d],
        [b, a, -d, c],
        [c, d, a, -b],
        [d, -c, b, a],
    ], dtype=object)


def _su2_matrices():
    half = Fraction(1, 2)
    return [quaternion_left(0, half, 0, 0), quaternion_left(0, 0, half, 0), quaternion_left(0, 0, 0, half)]


def _so3_matrices():
    mats = []
    for k in range(3):
        m = np.array([[Fraction(0)] * 3 for _ in range(3)], dtype=object)
        for i, j in itertools.permutations(range(3), 2):
            l = 3 - i - j
            if l == k:
                # (X_k)_{ij} = -epsilon_{kij}
                sign = 1 if (k, i, j) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else -1
                m[i, j] = Fraction(-sign)
        mats.append(m)
    return mats


def _sl2_matrices():
    h = np.array([[Fraction(1), Fraction(0)], [Fraction(0), Fraction(-1)]], dtype=object)
    return [h, _unit(2, 0, 1), _unit(2, 1, 0)]


def _abelian_matrices(n: int):
    mats = []
    for i in range(n):
        m = np.array([[Fraction(0)] * (2 * n) for _ in range(2 * n)], dtype=object)
        m[2 * i, 2 * i + 1] = Fraction(-1)
        m[2 * i + 1, 2 * i] = Fraction(1)
        mats.append(m)
    return mats


def _ut_matrices(n: int):
    return [_unit(n, i, j) for i in range(n) for j in range(i + 1, n)]


def _parse_size(name: str) -> int:
    try:
        size = int(name.split(":", 1)[1])
    except (IndexError, ValueError):
        raise StructureError(f"catalog entry {name!r} needs a positive size, e.g. abelian:3")
    if size < 1:
        raise StructureError(f"catalog entry {name!r} needs a positive size")
    return size


def catalog_algebra(name: str) -> LieAlgebra:
    """su2, so3, sl2, heis3, abelian:n or ut:n with constants computed from the matrix basis."""
    if name == "su2":
        mats, labels = _su2_matrices(), ["x", "y", "z"]
    elif name == "so3":
        mats, labels = _so3_matrices(), ["L1", "L2", "L3"]
    elif name == "sl2":
        mats, labels = _sl2_matrices(), ["h", "e", "f"]
    elif name == "heis3":
        mats, labels = [_unit(3, 0, 1), _unit(3, 1, 2), _unit(3, 0, 2)], ["x", "y", "z"]
    elif name.startswith("abelian:"):
        size = _parse_size(name)
        mats, labels = _abelian_matrices(size), [f"t{i + 1}" for i in range(size)]
    elif name.startswith("ut:"):
        size = _parse_size(name)
        if size < 2:
            raise StructureError("ut:n needs n >= 2")
        mats = _ut_matrices(size)
        labels = [f"E{i + 1}{j + 1}" for i in range(size) for j in range(i + 1, size)]
    else:
        raise StructureError(f"unknown algebra {name!r}; known: {', '.join(CATALOG_NAMES)}")
    LOGGER.debug("building catalog algebra %s", name)
    return LieAlgebra(name, structure_constants_from_matrices(mats), labels, mats)
