"""
Lie groupoids over a point or over a vector space, and their nerves.

A nerve point of degree p is a tuple of composable arrows (a_1, .., a_p) with
s(a_i) = t(a_{i+1}), plus the base object t(a_1) (the only datum when p = 0).
Face maps: d_0 drops a_1, d_i composes a_i a_{i+1}, d_p drops a_p; for p = 1
d_0 is the source and d_1 the target.
"""

import logging
from dataclasses import dataclass

import numpy as np

from groupworld.constants import RANDOM_FIBER_SCALE
from groupworld.groups import GroupRep, MatrixGroup
from tensorcore.errors import DimensionError

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class NervePoint:
    arrows: tuple
    base: object

    @property
    def degree(self) -> int:
        return len(self.arrows)


class Groupoid:
    """Structure maps every concrete groupoid provides; nerve operations are derived here."""

    name = "groupoid"
    group: MatrixGroup

    def target(self, a):
        raise NotImplementedError

    def source(self, a):
        raise NotImplementedError

    def compose(self, a, b):
        raise NotImplementedError

    def unit(self, x):
        raise NotImplementedError

    def inverse(self, a):
        raise NotImplementedError

    def group_element(self, a):
        raise NotImplementedError

    def origin(self):
        """The zero object of the base vector space (empty for a point)."""
        raise NotImplementedError

    def random_object(self, rng):
        raise NotImplementedError

    def random_arrow(self, rng, target):
        raise NotImplementedError

    def curve(self, section, source, eps):
        """Arrow b_eps(source) of the right-invariant flow of a section, to first order in eps."""
        raise NotImplementedError

    def scale_object(self, x, lam):
        raise NotImplementedError(f"{self.name} carries no fiberwise scalar multiplication")

    def scale_arrow(self, a, lam):
        raise NotImplementedError(f"{self.name} carries no fiberwise scalar multiplication")

    def point(self, arrows, base=None) -> NervePoint:
        arrows = tuple(arrows)
        if arrows:
            base = self.target(arrows[0])
        elif base is None:
            raise DimensionError("a degree-0 nerve point needs its base object")
        return NervePoint(arrows, base)

    def random_point(self, rng, p: int, base=None) -> NervePoint:
        x = self.random_object(rng) if base is None else base
        arrows = []
        target = x
        for _ in range(p):
            a = self.random_arrow(rng, target)
            arrows.append(a)
            target = self.source(a)
        return NervePoint(tuple(arrows), x)

    def face(self, pt: NervePoint, i: int) -> NervePoint:
        p = pt.degree
        if not 0 <= i <= p or p == 0:
            raise DimensionError(f"face {i} of a degree-{p} point")
        a = pt.arrows
        if i == 0:
            return self.point(a[1:], self.source(a[0]))
        if i == p:
            return self.point(a[:-1], pt.base)
        return self.point(a[:i - 1] + (self.compose(a[i - 1], a[i]),) + a[i + 1:], pt.base)

    def degeneracy(self, pt: NervePoint, i: int) -> NervePoint:
        """s_i inserts a unit arrow in position i (0-based) of the tuple."""
        p = pt.degree
        if not 0 <= i <= p:
            raise DimensionError(f"degeneracy {i} of a degree-{p} point")
        a = pt.arrows
        obj = pt.base if i == 0 else self.source(a[i - 1])
        return self.point(a[:i] + (self.unit(obj),) + a[i:], pt.base)

    def front(self, pt: NervePoint, p: int) -> NervePoint:
        return self.point(pt.arrows[:p], pt.base)

    def back(self, pt: NervePoint, p: int) -> NervePoint:
        rest = pt.arrows[p:]
        obj = pt.base if p == 0 else self.source(pt.arrows[p - 1])
        return self.point(rest, obj)

    def product(self, pt: NervePoint) -> np.ndarray:
        """g_1 ... g_p in the underlying group."""
        out = self.group.identity().astype(object)
        for a in pt.arrows:
            out = out @ self.group_element(a)
        return out

    def scale_point(self, pt: NervePoint, lam) -> NervePoint:
        """h_lambda: fiberwise scalar multiplication on the nerve."""
        return NervePoint(tuple(self.scale_arrow(a, lam) for a in pt.arrows), self.scale_object(pt.base, lam))


@dataclass(frozen=True, eq=False)
class ActionArrow:
    g: np.ndarray
    x: np.ndarray  # target


class ActionGroupoid(Groupoid):
    """G x V over V for a linear right-to-left action; base_dim = 0 gives the Lie group itself.

    source_matrix(g) is the anti-homomorphism S with s(g, x) = S(g) x: Phi(g)^-1 for
    a linear action Phi on V, Delta_g^T for the dual action groupoid t*C*.
    """

    def __init__(self, group: MatrixGroup, source_matrix=None, base_dim: int = 0, name: str | None = None):
        self.group = group
        self.base_dim = base_dim
        self._source_matrix = source_matrix
        self.name = name or group.name

    def source_matrix(self, g) -> np.ndarray:
        if self._source_matrix is None:
            return np.zeros((0, 0))
        return np.asarray(self._source_matrix(g), dtype=object)

    def target(self, a: ActionArrow):
        return a.x

    def source(self, a: ActionArrow):
        return self.source_matrix(a.g) @ a.x

    def compose(self, a: ActionArrow, b: ActionArrow) -> ActionArrow:
        return ActionArrow(a.g @ b.g, a.x)

    def unit(self, x) -> ActionArrow:
        return ActionArrow(self.group.identity(), np.asarray(x, dtype=object))

    def inverse(self, a: ActionArrow) -> ActionArrow:
        return ActionArrow(self.group.inverse(a.g), self.source(a))

    def group_element(self, a: ActionArrow):
        return a.g

    def origin(self):
        return np.zeros(self.base_dim, dtype=object)

    def random_object(self, rng):
        return rng.normal(scale=RANDOM_FIBER_SCALE, size=self.base_dim).astype(object)

    def random_arrow(self, rng, target) -> ActionArrow:
        return ActionArrow(self.group.random(rng), np.asarray(target, dtype=object))

    def curve(self, section, source, eps) -> ActionArrow:
        """(I + eps U, S(I - eps U) y) for a constant section u or a map y -> u(y)."""
        source = np.asarray(source, dtype=object)
        u = section(source) if callable(section) else section
        g = self.group.curve(u, eps)
        back = self.group.curve(u, -eps)
        return ActionArrow(g, self.source_matrix(back) @ source if self.base_dim else source)

    def scale_object(self, x, lam):
        return lam * np.asarray(x, dtype=object) if self.base_dim else x

    def scale_arrow(self, a: ActionArrow, lam) -> ActionArrow:
        return ActionArrow(a.g, self.scale_object(a.x, lam))

    def __repr__(self):
        return f"ActionGroupoid({self.name!r}, base_dim={self.base_dim})"


def lie_group(group: MatrixGroup) -> ActionGroupoid:
    return ActionGroupoid(group, name=group.name)


def linear_action(rep: GroupRep) -> ActionGroupoid:
    """G x R^n with arrows g: Phi(g)^-1 x -> x."""
    group = rep.group
    return ActionGroupoid(group, lambda g: rep(group.inverse(np.asarray(g, dtype=object))), rep.dim,
                          f"{group.name}x{rep.name}")


def dual_action(rep: GroupRep) -> ActionGroupoid:
    """t*C*: arrows (g, xi) with target xi and source Delta_g^T xi."""
    return ActionGroupoid(rep.group, lambda g: rep(g).T, rep.dim, f"{rep.group.name}x{rep.name}*")
