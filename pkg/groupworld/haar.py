"""
Deterministic Haar quadratures on the compact catalog groups.

Tori use the product trapezoid rule, exact on trigonometric polynomials of
degree below the resolution. SU(2) uses Hopf coordinates
  q = (cos(eta) e^{i a}, sin(eta) e^{i b}),  dmu ~ d(cos 2 eta) da db,
with Gauss-Legendre nodes in t = cos(2 eta) and trapezoid nodes in a and b.
SO(3) is the pushforward of the SU(2) rule along q -> (v -> q v q^-1).
"""

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from groupworld.groups import MatrixGroup, quaternion_rotation
from liealgebra.algebra import quaternion_left
from tensorcore.errors import QuadratureError

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class HaarQuadrature:
    nodes: list
    weights: np.ndarray
    scheme: str

    def integrate(self, fn) -> np.ndarray:
        """sum_i w_i fn(h_i), summed in node order."""
        total = 0
        for w, h in zip(self.weights, self.nodes):
            total = total + w * np.asarray(fn(h), dtype=object)
        return total

    def __len__(self):
        return len(self.nodes)


def _trapezoid(resolution: int) -> np.ndarray:
    return 2 * math.pi * np.arange(resolution) / resolution


def _torus_rule(group: MatrixGroup, resolution: int) -> HaarQuadrature:
    n = group.dim
    angles = _trapezoid(resolution)
    nodes = [np.asarray(group.exp(np.array(theta)), dtype=float)
             for theta in itertools.product(angles, repeat=n)]
    weights = np.full(len(nodes), 1.0 / len(nodes))
    return HaarQuadrature(nodes, weights, f"trapezoid:{resolution}^{n}")


def _hopf_quaternions(resolution: int):
    t_nodes, t_weights = np.polynomial.legendre.leggauss(resolution)
    angles = _trapezoid(resolution)
    for t, wt in zip(t_nodes, t_weights):
        c, s = math.sqrt((1 + t) / 2), math.sqrt((1 - t) / 2)
        for a, b in itertools.product(angles, repeat=2):
            q = (c * math.cos(a), c * math.sin(a), s * math.cos(b), s * math.sin(b))
            yield q, wt / 2 / resolution ** 2


def _su2_rule(resolution: int) -> HaarQuadrature:
    nodes, weights = [], []
    for q, w in _hopf_quaternions(resolution):
        nodes.append(quaternion_left(*q).astype(float))
        weights.append(w)
    return HaarQuadrature(nodes, np.array(weights), f"hopf-gauss:{resolution}")


def _so3_rule(resolution: int) -> HaarQuadrature:
    nodes, weights = [], []
    for q, w in _hopf_quaternions(resolution):
        nodes.append(quaternion_rotation(*q).astype(float))
        weights.append(w)
    return HaarQuadrature(nodes, np.array(weights), f"hopf-gauss-pushforward:{resolution}")


def haar(group: MatrixGroup, resolution: int) -> HaarQuadrature:
    if resolution < 1:
        raise QuadratureError(f"resolution must be positive, got {resolution}")
    if not group.compact:
        LOGGER.warning("Haar quadrature requested on non-compact %s", group.name)
        raise QuadratureError(f"{group.name} is not compact; supply nodes, weights and a cutoff")
    if group.name.startswith("torus:"):
        rule = _torus_rule(group, resolution)
    elif group.name == "su2":
        rule = _su2_rule(resolution)
    elif group.name == "so3":
        rule = _so3_rule(resolution)
    else:
        raise QuadratureError(f"no quadrature scheme for {group.name}")
    LOGGER.debug("%s on %s: %d nodes", rule.scheme, group.name, len(rule))
    return rule


def invariance_residual(rule: HaarQuadrature, fn, h) -> float:
    """|sum w_i f(h g_i) - sum w_i f(g_i)| for a scalar or vector valued f."""
    shifted = rule.integrate(lambda g: fn(h @ g))
    plain = rule.integrate(fn)
    return float(np.max(np.abs(np.asarray(shifted - plain, dtype=float)), initial=0.0))
