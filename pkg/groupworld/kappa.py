"""
Averaging homotopy operator on VB-groupoid cochains over a compact group:
  kappa(phi)(xi_1..xi_{p-1}) = sum_h w_h phi(xi_1, .., xi_{p-1}, sigma(h, s(xi_{p-1}))),
with sigma a linear splitting of the projection (xi, g, eta) -> g, and cutoff 1.
"""

import logging

import numpy as np

from groupworld.cochains import Cochain
from groupworld.haar import HaarQuadrature
from groupworld.vb import VBArrow, VBGroupoid
from tensorcore.errors import DimensionError, QuadratureError

LOGGER = logging.getLogger(__name__)


def block_splitting(groupoid: VBGroupoid):
    """sigma(h, xi) = (xi, h, 0)."""
    zeros = np.zeros(groupoid.dim_e, dtype=object)
    return lambda h, xi: VBArrow(np.asarray(xi, dtype=object), h, zeros)


def gauge_splitting(groupoid: VBGroupoid, gauge):
    """sigma'(h, xi) = (xi, h, L(h) xi) for a matrix-valued L: C* -> E*."""
    def sigma(h, xi):
        xi = np.asarray(xi, dtype=object)
        shift = np.asarray(gauge(h), dtype=object).reshape(groupoid.dim_e, groupoid.dim_c)
        return VBArrow(xi, h, shift @ xi)
    return sigma


def kappa(phi: Cochain, rule: HaarQuadrature, splitting=None) -> Cochain:
    """Degree p-1 average of phi over the last slot, filled by splitting(h, s(xi_{p-1})).

    splitting defaults to block_splitting. On cocycles delta kappa(phi) = (-1)^p phi
    and the result does not depend on the splitting. Needs p >= 2 and a compact group.
    """
    groupoid = phi.groupoid
    if not isinstance(groupoid, VBGroupoid):
        raise DimensionError("kappa acts on cochains of a VB-groupoid")
    if phi.p < 2:
        raise DimensionError(f"kappa needs degree >= 2, got {phi.p}")
    if not groupoid.group.compact:
        raise QuadratureError(f"{groupoid.group.name} is not compact; no cutoff available")
    sigma = splitting or block_splitting(groupoid)

    def fn(pt):
        last_source = groupoid.source(pt.arrows[-1])
        total = 0
        for w, h in zip(rule.weights, rule.nodes):
            full = groupoid.point(pt.arrows + (sigma(h, last_source),))
            total = total + w * phi(full)
        return total

    LOGGER.debug("kappa(%s) with %s", phi.name, rule.scheme)
    return phi.like(phi.p - 1, fn, f"kappa({phi.name})")
