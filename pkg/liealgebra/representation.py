"""
Linear representations of a LieAlgebra: rho[i] is the matrix of e_i acting on C.

Symmetric powers act on symmetric multilinear forms on C* stored by their values
on weakly increasing index tuples, which is how S^k C enters the graded models.
"""

import itertools
import logging
from fractions import Fraction
from numbers import Rational

import numpy as np

from liealgebra.algebra import LieAlgebra
from tensorcore.errors import DimensionError, StructureError
from tensorcore.exact import fraction_matrix
from tensorcore.jets import Jet, fresh_symbol, part_array
from tensorcore.tensors import sym_keys

LOGGER = logging.getLogger(__name__)

FLOAT_FLATNESS_TOL = 1e-9


def _is_exact(m: np.ndarray) -> bool:
    return all(isinstance(x, Rational) for x in m.flat)


class Representation:
    def __init__(self, algebra: LieAlgebra, rho, name: str = "rep"):
        self.algebra = algebra
        self.name = name
        mats = [np.asarray(m, dtype=object) for m in rho]
        if len(mats) != algebra.n:
            raise DimensionError(f"{name}: {len(mats)} matrices for an algebra of dimension {algebra.n}")
        dims = {m.shape for m in mats}
        if len(dims) > 1 or any(len(s) != 2 or s[0] != s[1] for s in dims):
            raise DimensionError(f"{name}: matrices must be square and of one size")
        self.dim = mats[0].shape[0] if mats else 0
        self.exact = all(_is_exact(m) for m in mats)
        self.rho = [fraction_matrix(m) if self.exact else m for m in mats]

    def curvature(self, i: int, j: int) -> np.ndarray:
        c = self.algebra.c
        out = self.rho[i] @ self.rho[j] - self.rho[j] @ self.rho[i]
        for k in range(self.algebra.n):
            if c[i, j, k] != 0:
                out = out - c[i, j, k] * self.rho[k]
        return out

    @property
    def flat(self) -> bool:
        for i, j in itertools.combinations(range(self.algebra.n), 2):
            f = self.curvature(i, j)
            if self.exact:
                if any(x != 0 for x in f.flat):
                    return False
            elif np.max(np.abs(f.astype(float)), initial=0.0) > FLOAT_FLATNESS_TOL:
                return False
        return True

    def check_flat(self):
        if not self.flat:
            raise StructureError(f"representation {self.name} is not flat")

    def act(self, u, c) -> np.ndarray:
        """rho(u) c for a coefficient vector u."""
        out = np.zeros(self.dim, dtype=object)
        for ui, m in zip(u, self.rho):
            if ui != 0:
                out = out + ui * (m @ np.asarray(c, dtype=object))
        return out

    def __repr__(self):
        return f"Representation({self.name!r}, dim={self.dim}, algebra={self.algebra.name})"


def trivial(algebra: LieAlgebra, dim: int = 1) -> Representation:
    zero = np.array([[Fraction(0)] * dim for _ in range(dim)], dtype=object).reshape(dim, dim)
    return Representation(algebra, [zero.copy() for _ in range(algebra.n)], f"trivial:{dim}")


def adjoint(algebra: LieAlgebra) -> Representation:
    return Representation(algebra, [algebra.ad(i) for i in range(algebra.n)], "adjoint")


def dual(rep: Representation) -> Representation:
    return Representation(rep.algebra, [-m.T for m in rep.rho], f"dual({rep.name})")


def coadjoint(algebra: LieAlgebra) -> Representation:
    return Representation(algebra, [-algebra.ad(i).T for i in range(algebra.n)], "coadjoint")


def from_matrices(algebra: LieAlgebra, matrices, name: str = "matrices") -> Representation:
    rep = Representation(algebra, matrices, name)
    rep.check_flat()
    return rep


def tensor(r1: Representation, r2: Representation) -> Representation:
    """r1 (x) r2 with index a * dim2 + b."""
    if r1.algebra is not r2.algebra and r1.algebra.n != r2.algebra.n:
        raise DimensionError("tensor product over different algebras")
    i1 = np.eye(r1.dim, dtype=int).astype(object)
    i2 = np.eye(r2.dim, dtype=int).astype(object)
    mats = [np.kron(a, i2) + np.kron(i1, b) for a, b in zip(r1.rho, r2.rho)]
    return Representation(r1.algebra, mats, f"{r1.name}*{r2.name}")


def symmetric_power_matrix(a, dim: int, k: int) -> np.ndarray:
    """(A.T)_J = sum_i sum_l A[J_i, l] T[sort(J with J_i -> l)] on canonical k-tuples."""
    keys = sym_keys(dim, k)
    index = {key: n for n, key in enumerate(keys)}
    a = np.asarray(a, dtype=object)
    out = np.zeros((len(keys), len(keys)), dtype=object)
    for row, key in enumerate(keys):
        for i in range(k):
            for l in range(dim):
                if a[key[i], l] != 0:
                    target = tuple(sorted(key[:i] + (l,) + key[i + 1:]))
                    out[row, index[target]] += a[key[i], l]
    return out


def symmetric_power(rep: Representation, k: int) -> Representation:
    if k < 0:
        raise DimensionError("negative symmetric power")
    mats = [symmetric_power_matrix(m, rep.dim, k) for m in rep.rho]
    return Representation(rep.algebra, mats, f"S^{k}({rep.name})")


def differentiate(algebra: LieAlgebra, delta, name: str = "derived") -> Representation:
    """Lie algebra representation of a group representation delta (matrix-valued, jet-capable)."""
    mats = []
    for i in range(algebra.n):
        eps = fresh_symbol("d")
        g = np.eye(algebra.matrices[0].shape[0], dtype=float).astype(object) + \
            Jet.variable(eps) * algebra.matrices[i].astype(float)
        mats.append(part_array(delta(g), eps, 1).astype(float))
    rep = Representation(algebra, mats, name)
    LOGGER.debug("differentiated %s: flat=%s", name, rep.flat)
    return rep
