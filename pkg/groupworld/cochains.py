"""
Normalized cochains on groupoid nerves: simplicial differential, cup product and
the k-homogeneous projection on groupoids that carry a fiberwise scaling.
"""

import logging
import math

import numpy as np

from groupworld.constants import FD_STEP, NORMALIZATION_SAMPLES, NORMALIZATION_TOL
from groupworld.groupoids import Groupoid, NervePoint
from tensorcore.errors import DimensionError, NormalizationError, TruncationError
from tensorcore.jets import Jet, coefficient_of, fresh_symbol
from tensorcore.tensors import as_vector

LOGGER = logging.getLogger(__name__)


class Cochain:
    """A p-cochain with values in R^value_dim.

    twist, when set, is the group representation Delta the values transform by;
    it enters the first face term of delta.
    """

    def __init__(self, groupoid: Groupoid, p: int, fn, value_dim: int = 1, twist=None, name: str = "f"):
        if p < 0:
            raise DimensionError(f"negative cochain degree {p}")
        if twist is not None and twist.dim != value_dim:
            raise DimensionError(f"twist of dimension {twist.dim} for values of dimension {value_dim}")
        self.groupoid = groupoid
        self.p = p
        self.fn = fn
        self.value_dim = value_dim
        self.twist = twist
        self.name = name
        self.diagnostics = {}

    def __call__(self, pt: NervePoint) -> np.ndarray:
        if pt.degree != self.p:
            raise DimensionError(f"{self.name}: degree-{self.p} cochain at a degree-{pt.degree} point")
        return as_vector(self.fn(pt), self.value_dim)

    def like(self, p: int, fn, name: str) -> "Cochain":
        return Cochain(self.groupoid, p, fn, self.value_dim, self.twist, name)

    def __add__(self, other: "Cochain") -> "Cochain":
        _check_compatible(self, other)
        return self.like(self.p, lambda pt: self(pt) + other(pt), f"({self.name}+{other.name})")

    def __sub__(self, other: "Cochain") -> "Cochain":
        _check_compatible(self, other)
        return self.like(self.p, lambda pt: self(pt) - other(pt), f"({self.name}-{other.name})")

    def __mul__(self, scalar) -> "Cochain":
        return self.like(self.p, lambda pt: scalar * self(pt), f"{scalar}*{self.name}")

    __rmul__ = __mul__

    def __repr__(self):
        return f"Cochain({self.name!r}, p={self.p}, value_dim={self.value_dim}, on={self.groupoid.name})"


def _check_compatible(a: Cochain, b: Cochain):
    if a.p != b.p or a.value_dim != b.value_dim or a.groupoid is not b.groupoid:
        raise DimensionError(f"cochains {a.name} and {b.name} live in different spaces")


def zero_cochain(groupoid: Groupoid, p: int, value_dim: int = 1, twist=None) -> Cochain:
    return Cochain(groupoid, p, lambda pt: np.zeros(value_dim, dtype=object), value_dim, twist, "0")


def unit_cochain(groupoid: Groupoid) -> Cochain:
    """The constant 0-cochain 1, unit of the cup product."""
    return Cochain(groupoid, 0, lambda pt: 1, 1, None, "1")


def simplicial_delta(f: Cochain) -> Cochain:
    """(delta f)(a_1..a_{p+1}) = Delta_{g_1} f(d_0 a) + sum_{i>=1} (-1)^i f(d_i a)."""
    groupoid = f.groupoid

    def fn(pt):
        total = f(groupoid.face(pt, 0))
        if f.twist is not None:
            total = f.twist(groupoid.group_element(pt.arrows[0])) @ total
        for i in range(1, f.p + 2):
            term = f(groupoid.face(pt, i))
            total = total + term if i % 2 == 0 else total - term
        return total

    return f.like(f.p + 1, fn, f"d{f.name}")


def cup(f1: Cochain, f2: Cochain) -> Cochain:
    """(f1 * f2)(a_1..a_{p+p'}) = f1(a_1..a_p) f2(a_{p+1}..); one factor must be scalar.

    A coefficient-valued right factor is transported to t(a_1) by Delta_{g_1...g_p}.
    """
    if f1.groupoid is not f2.groupoid:
        raise DimensionError("cup product of cochains on different groupoids")
    if f1.value_dim != 1 and f2.value_dim != 1:
        raise DimensionError("cup product needs a scalar factor")
    groupoid = f1.groupoid
    p = f1.p

    def fn(pt):
        left = f1(groupoid.front(pt, p))
        right = f2(groupoid.back(pt, p))
        if f2.twist is not None and p > 0:
            right = f2.twist(groupoid.product(groupoid.front(pt, p))) @ right
        if f1.value_dim == 1:
            return left[0] * right
        return left * right[0]

    dim = max(f1.value_dim, f2.value_dim)
    twist = f1.twist if f1.value_dim != 1 else f2.twist
    return Cochain(groupoid, p + f2.p, fn, dim, twist, f"{f1.name}*{f2.name}")


def normalization_residual(f: Cochain, rng, samples: int = NORMALIZATION_SAMPLES) -> float:
    """max |f(s_i a)| over sampled degenerate simplices."""
    if f.p == 0:
        return 0.0
    groupoid = f.groupoid
    worst = 0.0
    for _ in range(samples):
        pt = groupoid.random_point(rng, f.p - 1)
        for i in range(f.p):
            value = f(groupoid.degeneracy(pt, i))
            worst = max(worst, max((abs(complex(x)) for x in value), default=0.0))
    return worst


def check_normalized(f: Cochain, rng, samples: int = NORMALIZATION_SAMPLES, tol: float = NORMALIZATION_TOL):
    residual = normalization_residual(f, rng, samples)
    LOGGER.debug("normalization of %s: %.3e", f.name, residual)
    if residual > tol:
        raise NormalizationError(f"{f.name} does not vanish on degenerate simplices (residual {residual:.3e})")
    return residual


def _central_difference(values: dict, k: int, h: float) -> np.ndarray:
    """k-th derivative at 0 from samples at (k/2 - j) h, j = 0..k."""
    total = 0
    for j in range(k + 1):
        total = total + (-1) ** j * math.comb(k, j) * values[j]
    return total / h ** k


def hom_project_group(f: Cochain, k: int, fd_step: float = FD_STEP) -> Cochain:
    """(1/k!) d^k/dlambda^k f(h_lambda a) at lambda = 0, through an order-k lambda jet.

    Cochains whose evaluation cannot propagate the jet fall back to central
    differences; the worst error estimate seen is kept in diagnostics["fd_error"].
    """
    if k < 0:
        raise DimensionError(f"negative homogeneity degree {k}")
    groupoid = f.groupoid

    def by_jet(pt):
        lam = Jet.variable(fresh_symbol("lambda"), order=max(k, 1))
        value = f(groupoid.scale_point(pt, lam))
        name = lam.symbols[0]
        return np.array([coefficient_of(x, {name: k}) for x in value], dtype=object)

    def by_differences(pt, h):
        samples = {j: np.asarray(f(groupoid.scale_point(pt, (k / 2 - j) * h)), dtype=float)
                   for j in range(k + 1)}
        return _central_difference(samples, k, h) / math.factorial(k)

    def fn(pt):
        try:
            return by_jet(pt)
        except (TypeError, ZeroDivisionError, TruncationError) as exc:
            coarse = by_differences(pt, fd_step)
            fine = by_differences(pt, fd_step / 2)
            error = float(np.max(np.abs(coarse - fine), initial=0.0))
            projected.diagnostics["fd_error"] = max(projected.diagnostics.get("fd_error", 0.0), error)
            LOGGER.warning("%s: jet projection failed (%s); finite differences, error ~ %.2e",
                           f.name, exc, error)
            return fine

    projected = f.like(f.p, fn, f"P{k}({f.name})")
    return projected


def homogeneity_residual(f: Cochain, k: int, rng, lambdas=(0.5, 2.0), samples: int = 16) -> float:
    """max |f(h_lambda a) - lambda^k f(a)| over sampled points."""
    groupoid = f.groupoid
    worst = 0.0
    for _ in range(samples):
        pt = groupoid.random_point(rng, f.p)
        base = np.asarray(f(pt), dtype=float)
        for lam in lambdas:
            scaled = np.asarray(f(groupoid.scale_point(pt, lam)), dtype=float)
            worst = max(worst, float(np.max(np.abs(scaled - lam ** k * base), initial=0.0)))
    return worst


def sampled_max(fn, groupoid: Groupoid, p: int, rng, samples: int) -> float:
    """max |fn(a)| over random degree-p points (fn returns a vector)."""
    worst = 0.0
    for _ in range(samples):
        value = fn(groupoid.random_point(rng, p))
        worst = max(worst, max((abs(complex(x)) for x in np.asarray(value).reshape(-1)), default=0.0))
    return worst
