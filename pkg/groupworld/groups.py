"""
Matrix Lie groups from a small catalog, and their finite-dimensional representations.

Group elements are square numpy arrays; entries may be jets, so every map here
is written with ring operations only (no in-place float casts) wherever it is
used along derivative curves.
"""

import logging
import math

import numpy as np
from scipy.linalg import expm

from groupworld.constants import COMPACT_PREFIXES, GROUP_NAMES, RANDOM_ALGEBRA_SCALE
from liealgebra.algebra import LieAlgebra, catalog_algebra, quaternion_left
from liealgebra.representation import Representation, differentiate
from tensorcore import jets
from tensorcore.errors import DimensionError, StructureError
from tensorcore.jets import has_jets, matrix_inverse, values_array

LOGGER = logging.getLogger(__name__)


def _nilpotent_exp(x: np.ndarray) -> np.ndarray:
    """sum_j x^j / j!, exact when x is nilpotent (jets with zero value, unipotent algebras)."""
    size = x.shape[0]
    out = np.eye(size, dtype=float).astype(object)
    term = np.eye(size, dtype=float).astype(object)
    bound = sum(jets.jet_orders(x).values()) if has_jets(x) else size
    for j in range(1, max(bound, size) + 1):
        term = term @ x / j
        out = out + term
    return out


def _is_nilpotent_jet(x: np.ndarray) -> bool:
    return has_jets(x) and not np.any(values_array(x) != 0)


def quaternion_rotation(a, b, c, d) -> np.ndarray:
    """Rotation v -> q v q^-1 of R^3 for the unit quaternion q = a + bi + cj + dk."""
    return np.array([
        [1 - 2 * (c * c + d * d), 2 * (b * c - a * d), 2 * (b * d + a * c)],
        [2 * (b * c + a * d), 1 - 2 * (b * b + d * d), 2 * (c * d - a * b)],
        [2 * (b * d - a * c), 2 * (c * d + a * b), 1 - 2 * (b * b + c * c)],
    ], dtype=object)


class MatrixGroup:
    """A connected matrix Lie group with its Lie algebra and exponential map."""

    def __init__(self, name: str, algebra: LieAlgebra, compact: bool, exp_map=None, sampler=None):
        self.name = name
        self.algebra = algebra
        self.compact = compact
        self.size = algebra.matrices[0].shape[0]
        self.dim = algebra.n
        self._exp_map = exp_map
        self._sampler = sampler

    def identity(self) -> np.ndarray:
        return np.eye(self.size, dtype=float)

    def exp(self, u) -> np.ndarray:
        """exp of the algebra element with coordinates u."""
        x = self.algebra.element_matrix(u)
        if _is_nilpotent_jet(x):
            return _nilpotent_exp(x)
        if self._exp_map is not None:
            return self._exp_map(np.asarray(u, dtype=object))
        if has_jets(x):
            raise StructureError(f"{self.name}: exp of a jet with nonzero value part")
        return expm(np.asarray(x, dtype=float))

    def mult(self, a, b) -> np.ndarray:
        return a @ b

    def inverse(self, g) -> np.ndarray:
        # compact catalog groups are realised by orthogonal matrices
        if self.compact:
            return np.asarray(g).T
        return matrix_inverse(g)

    def curve(self, u, eps) -> np.ndarray:
        """First-order curve I + eps*U through the identity (eps an order-1 jet)."""
        return np.eye(self.size, dtype=float).astype(object) + eps * self.algebra.element_matrix(u)

    def random(self, rng) -> np.ndarray:
        if self._sampler is not None:
            return self._sampler(rng)
        return np.asarray(self.exp(rng.normal(scale=RANDOM_ALGEBRA_SCALE, size=self.dim)), dtype=float)

    def angles(self, g) -> list:
        """Angle chart of a torus element: theta_i = atan2(g[2i+1, 2i], g[2i, 2i])."""
        if not self.name.startswith("torus:"):
            raise StructureError(f"{self.name} has no angle chart")
        return [jets.atan2(g[2 * i + 1, 2 * i], g[2 * i, 2 * i]) for i in range(self.dim)]

    def invariant_residuals(self, rng, samples: int = 8) -> dict:
        """exp(0) = I, exp((s+t)u) = exp(su)exp(tu), and the jet commutator of exp curves."""
        out = {"exp_zero": float(np.max(np.abs(self.exp(np.zeros(self.dim)) - self.identity())))}
        worst = 0.0
        for _ in range(samples):
            u = rng.normal(size=self.dim)
            s, t = rng.uniform(-1, 1, size=2)
            lhs = np.asarray(self.exp((s + t) * u), dtype=float)
            rhs = np.asarray(self.exp(s * u), dtype=float) @ np.asarray(self.exp(t * u), dtype=float)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        out["one_parameter"] = worst
        worst = 0.0
        for i in range(self.dim):
            for j in range(self.dim):
                e1 = jets.Jet.variable(jets.fresh_symbol("c"))
                e2 = jets.Jet.variable(jets.fresh_symbol("c"))
                a = self.curve(self.algebra.basis_vector(i), e1)
                b = self.curve(self.algebra.basis_vector(j), e2)
                comm = a @ b @ self.inverse(a) @ self.inverse(b)
                mixed = jets.coefficient_array(comm, {e1.symbols[0]: 1, e2.symbols[0]: 1})
                bracket = self.algebra.element_matrix(self.algebra.c[i, j, :])
                worst = max(worst, float(np.max(np.abs(np.asarray(mixed, dtype=float)
                                                        - np.asarray(bracket, dtype=float)))))
        out["commutator"] = worst
        LOGGER.debug("%s invariants: %s", self.name, out)
        return out

    def __repr__(self):
        return f"MatrixGroup({self.name!r}, size={self.size})"


def _torus_exp(n: int):
    def exp_map(u):
        g = np.zeros((2 * n, 2 * n), dtype=object)
        for i in range(n):
            c, s = jets.cos(u[i]), jets.sin(u[i])
            g[2 * i, 2 * i], g[2 * i, 2 * i + 1] = c, -s
            g[2 * i + 1, 2 * i], g[2 * i + 1, 2 * i + 1] = s, c
        return g if has_jets(g) else g.astype(float)
    return exp_map


def _torus_sampler(n: int):
    exp_map = _torus_exp(n)
    return lambda rng: exp_map(rng.uniform(0, 2 * math.pi, size=n))


def _unit_quaternion(rng) -> np.ndarray:
    q = rng.normal(size=4)
    return q / np.linalg.norm(q)


def _su2_exp(u):
    u = np.asarray(u, dtype=float)
    angle = float(np.linalg.norm(u)) / 2
    if angle == 0:
        return np.eye(4)
    axis = u / np.linalg.norm(u)
    return quaternion_left(math.cos(angle), *(math.sin(angle) * axis)).astype(float)


def _so3_exp(u):
    u = np.asarray(u, dtype=float)
    theta = float(np.linalg.norm(u))
    k = np.array([[0, -u[2], u[1]], [u[2], 0, -u[0]], [-u[1], u[0], 0]])
    if theta == 0:
        return np.eye(3)
    return np.eye(3) + math.sin(theta) / theta * k + (1 - math.cos(theta)) / theta ** 2 * (k @ k)


def _unipotent_exp(algebra: LieAlgebra):
    return lambda u: _nilpotent_exp(algebra.element_matrix(u)).astype(float)


def catalog_group(name: str) -> MatrixGroup:
    """torus:n, u1, su2, so3, heis3, ut:n or sl2."""
    if name == "u1":
        name = "torus:1"
    if name.startswith("torus:"):
        algebra = catalog_algebra("abelian:" + name.split(":", 1)[1])
        n = algebra.n
        group = MatrixGroup(name, algebra, True, _torus_exp(n), _torus_sampler(n))
    elif name == "su2":
        group = MatrixGroup(name, catalog_algebra("su2"), True, _su2_exp,
                            lambda rng: quaternion_left(*_unit_quaternion(rng)).astype(float))
    elif name == "so3":
        group = MatrixGroup(name, catalog_algebra("so3"), True, _so3_exp,
                            lambda rng: quaternion_rotation(*_unit_quaternion(rng)).astype(float))
    elif name == "heis3" or name.startswith("ut:"):
        algebra = catalog_algebra(name)
        group = MatrixGroup(name, algebra, False, _unipotent_exp(algebra))
    elif name == "sl2":
        group = MatrixGroup(name, catalog_algebra("sl2"), False)
    else:
        raise StructureError(f"unknown group {name!r}; known: {', '.join(GROUP_NAMES)}")
    LOGGER.debug("built %r (compact=%s)", group, group.compact)
    return group


def is_compact_name(name: str) -> bool:
    return name.startswith(COMPACT_PREFIXES)


class GroupRep:
    """A smooth representation g -> matrix(g) on R^dim; matrix must accept jet entries."""

    def __init__(self, group: MatrixGroup, dim: int, matrix, name: str = "rep"):
        self.group = group
        self.dim = dim
        self._matrix = matrix
        self.name = name

    def __call__(self, g) -> np.ndarray:
        m = np.asarray(self._matrix(g), dtype=object)
        if m.shape != (self.dim, self.dim):
            raise DimensionError(f"{self.name}: matrix of shape {m.shape}, expected ({self.dim}, {self.dim})")
        return m

    def derivative(self) -> Representation:
        """The induced Lie algebra representation, through first-order jets."""
        return differentiate(self.group.algebra, self, f"d{self.name}")

    def homomorphism_residual(self, rng, samples: int = 8) -> float:
        worst = 0.0
        for _ in range(samples):
            a, b = self.group.random(rng), self.group.random(rng)
            lhs = np.asarray(self(a @ b), dtype=float)
            rhs = np.asarray(self(a), dtype=float) @ np.asarray(self(b), dtype=float)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst

    def __repr__(self):
        return f"GroupRep({self.name!r}, dim={self.dim}, group={self.group.name})"


def trivial_rep(group: MatrixGroup, dim: int = 1) -> GroupRep:
    return GroupRep(group, dim, lambda g: np.eye(dim, dtype=float).astype(object), f"trivial:{dim}")


def defining_rep(group: MatrixGroup) -> GroupRep:
    return GroupRep(group, group.size, lambda g: np.asarray(g, dtype=object), "defining")


def adjoint_rep(group: MatrixGroup) -> GroupRep:
    algebra = group.algebra
    mats = [m.astype(float) for m in algebra.matrices]

    def matrix(g):
        g = np.asarray(g, dtype=object)
        ginv = group.inverse(g)
        return np.column_stack([algebra.coords(g @ x @ ginv) for x in mats])

    return GroupRep(group, algebra.n, matrix, "Ad")


def dual_rep(rep: GroupRep) -> GroupRep:
    """g -> rep(g^-1)^T on the dual space."""
    return GroupRep(rep.group, rep.dim, lambda g: rep(rep.group.inverse(np.asarray(g, dtype=object))).T,
                    f"dual({rep.name})")


def character_rep(group: MatrixGroup, weights) -> GroupRep:
    """Rotation of R^2 by sum_i w_i theta_i on a torus, built from integer powers of the blocks."""
    if not group.name.startswith("torus:"):
        raise StructureError("character representations are defined on tori only")
    weights = [int(w) for w in weights]
    if len(weights) != group.dim:
        raise DimensionError(f"{len(weights)} weights for a torus of dimension {group.dim}")

    def matrix(g):
        g = np.asarray(g, dtype=object)
        out = np.eye(2, dtype=float).astype(object)
        for i, w in enumerate(weights):
            block = g[2 * i:2 * i + 2, 2 * i:2 * i + 2]
            step = block if w >= 0 else block.T
            for _ in range(abs(w)):
                out = out @ step
        return out

    return GroupRep(group, 2, matrix, "chi" + ",".join(str(w) for w in weights))


def direct_sum(r1: GroupRep, r2: GroupRep) -> GroupRep:
    def matrix(g):
        out = np.zeros((r1.dim + r2.dim, r1.dim + r2.dim), dtype=object)
        out[:r1.dim, :r1.dim] = r1(g)
        out[r1.dim:, r1.dim:] = r2(g)
        return out

    return GroupRep(r1.group, r1.dim + r2.dim, matrix, f"{r1.name}+{r2.name}")
