"""
The groupoid TG x_G .. x_G TG x_G t*C* (q tangent copies) over C*, for a matrix group G
and a representation Delta on C.

An arrow is (g, X_1..X_q, xi) with right-trivialized tangents (the tangent vector
is X_j g) and target xi; its source is Delta_g^T xi. The product is the tangent
functor applied slotwise:
  (g, X, xi)(h, Y, eta) = (g h, X_j + g Y_j g^-1, xi).
"""

import logging
from dataclasses import dataclass

import numpy as np

from groupworld.constants import AXIOM_TOL, RANDOM_FIBER_SCALE
from groupworld.groupoids import Groupoid
from groupworld.groups import GroupRep
from tensorcore.errors import DimensionError, StructureError
from tensorcore.jets import Jet, fresh_symbol, part_array

LOGGER = logging.getLogger(__name__)

MAX_TANGENT_COPIES = 2


@dataclass(frozen=True, eq=False)
class TangentArrow:
    g: np.ndarray
    xs: tuple
    xi: np.ndarray


@dataclass(frozen=True)
class TangentSection:
    """kind "T": tangent lift of u; kind "Z": vertical lift of u into copy `slot` (1-based)."""
    kind: str
    u: object
    slot: int = 0


def tangent_lift(u) -> TangentSection:
    return TangentSection("T", u)


def vertical_lift(slot: int, u) -> TangentSection:
    return TangentSection("Z", u, slot)


class TangentGroup(Groupoid):
    def __init__(self, rep: GroupRep, q: int):
        if not 0 <= q <= MAX_TANGENT_COPIES:
            raise DimensionError(f"tangent groupoid with q={q}; supported q <= {MAX_TANGENT_COPIES}")
        self.rep = rep
        self.group = rep.group
        self.q = q
        self.dim_c = rep.dim
        self.name = f"T^{q}{self.group.name}x{rep.name}*"

    def _zero_tangent(self):
        return np.zeros((self.group.size, self.group.size), dtype=object)

    def target(self, a: TangentArrow):
        return a.xi

    def source(self, a: TangentArrow):
        return self.rep(a.g).T @ a.xi

    def compose(self, a: TangentArrow, b: TangentArrow) -> TangentArrow:
        ginv = self.group.inverse(a.g)
        xs = tuple(x + a.g @ y @ ginv for x, y in zip(a.xs, b.xs))
        return TangentArrow(a.g @ b.g, xs, a.xi)

    def unit(self, x) -> TangentArrow:
        return TangentArrow(self.group.identity(), tuple(self._zero_tangent() for _ in range(self.q)),
                            np.asarray(x, dtype=object))

    def inverse(self, a: TangentArrow) -> TangentArrow:
        ginv = self.group.inverse(a.g)
        return TangentArrow(ginv, tuple(-(ginv @ x @ a.g) for x in a.xs), self.source(a))

    def group_element(self, a: TangentArrow):
        return a.g

    def origin(self):
        return np.zeros(self.dim_c, dtype=object)

    def random_object(self, rng):
        return rng.normal(scale=RANDOM_FIBER_SCALE, size=self.dim_c).astype(object)

    def random_arrow(self, rng, target) -> TangentArrow:
        algebra = self.group.algebra
        xs = tuple(np.asarray(algebra.element_matrix(rng.normal(size=algebra.n)), dtype=float)
                   for _ in range(self.q))
        return TangentArrow(self.group.random(rng), xs, np.asarray(target, dtype=object))

    def curve(self, section: TangentSection, source, eps) -> TangentArrow:
        """T u: (I + eps U, 0.., Delta_{I - eps U}^T y); Z_i u: (I, eps U in copy i, y)."""
        source = np.asarray(source, dtype=object)
        if section.kind == "T":
            back = self.rep(self.group.curve(section.u, -eps))
            return TangentArrow(self.group.curve(section.u, eps),
                                tuple(self._zero_tangent() for _ in range(self.q)), back.T @ source)
        if section.kind == "Z":
            if not 1 <= section.slot <= self.q:
                raise DimensionError(f"vertical lift into copy {section.slot} of {self.q}")
            x = eps * self.group.algebra.element_matrix(section.u)
            xs = tuple(x if j + 1 == section.slot else self._zero_tangent() for j in range(self.q))
            return TangentArrow(self.group.identity().astype(object), xs, source)
        raise DimensionError(f"unknown section kind {section.kind!r}")

    def scale_object(self, x, lam):
        return lam * np.asarray(x, dtype=object)

    def scale_arrow(self, a: TangentArrow, lam) -> TangentArrow:
        return TangentArrow(a.g, a.xs, lam * a.xi)

    def tangents(self, pt, j: int) -> tuple:
        """The j-th tangent vector (1-based) of B_p G carried by a nerve point, slot by slot."""
        return tuple(a.xs[j - 1] for a in pt.arrows)

    def associativity_residual(self, rng, samples: int = 32) -> float:
        worst = 0.0
        for _ in range(samples):
            a, b, c = self.random_point(rng, 3).arrows
            left = self.compose(self.compose(a, b), c)
            right = self.compose(a, self.compose(b, c))
            parts = [left.g - right.g, left.xi - right.xi] + [x - y for x, y in zip(left.xs, right.xs)]
            worst = max(worst, max(float(np.max(np.abs(np.asarray(d, dtype=float)), initial=0.0))
                                   for d in parts))
        return worst

    def check_axioms(self, rng, samples: int = 32, tol: float = AXIOM_TOL) -> float:
        residual = self.associativity_residual(rng, samples)
        if residual > tol:
            raise StructureError(f"{self.name}: associativity residual {residual:.3e}")
        return residual

    def __repr__(self):
        return f"TangentGroup({self.name!r})"


def tangent_group(rep: GroupRep, q: int) -> TangentGroup:
    return TangentGroup(rep, q)


def lift_residual(tg: TangentGroup, u, rng, samples: int = 8) -> float:
    """Product with the T u curve against the tangent lift of the left flow, in actual coordinates:
    (e^{eps U} g, e^{eps U} (X_j g), Delta_{e^{-eps U}}^T xi)."""
    worst = 0.0
    for _ in range(samples):
        a = tg.random_arrow(rng, tg.random_object(rng))
        eps = Jet.variable(fresh_symbol("lift"))
        name = eps.symbols[0]
        moved = tg.compose(tg.curve(tangent_lift(u), a.xi, eps), a)
        flow = tg.group.curve(u, eps)
        expected_g = flow @ a.g
        expected_vectors = [flow @ (x @ a.g) for x in a.xs]
        expected_xi = tg.rep(tg.group.curve(u, -eps)).T @ a.xi
        gaps = [moved.g - expected_g] + [x @ moved.g - v for x, v in zip(moved.xs, expected_vectors)]
        gaps.append(tg.target(moved) - expected_xi)
        for gap in gaps:
            derivative = np.asarray(part_array(gap, name, 1), dtype=float)
            worst = max(worst, float(np.max(np.abs(derivative), initial=0.0)))
    return worst
