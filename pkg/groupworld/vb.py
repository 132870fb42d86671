"""
The VB-groupoid V = s*E* (+) t*C* of a 2-term representation up to homotopy of a group.

Arrows are triples (xi, g, eta) with xi in C* (the target) and eta in E*:
  t(xi, g, eta) = xi,  s(xi, g, eta) = (Delta^C_g)^T xi - d^T eta,
  (xi1, g1, eta1)(xi2, g2, eta2) = (xi1, g1 g2, Omega_{g1,g2}^T xi1 + (Delta^E_{g2})^T eta1 + eta2).
The structure data is duck-typed: anything with group, dim_e, dim_c, partial,
delta_e(g), delta_c(g) and omega(g1, g2) works.
"""

import logging
from dataclasses import dataclass

import numpy as np

from groupworld.cochains import simplicial_delta
from groupworld.constants import AXIOM_TOL, RANDOM_FIBER_SCALE
from groupworld.groupoids import Groupoid, NervePoint
from tensorcore.errors import StructureError

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class VBArrow:
    xi: np.ndarray
    g: np.ndarray
    eta: np.ndarray


@dataclass(frozen=True)
class VBSection:
    """chi_u + Upsilon_eta: u in the Lie algebra, eta in E*; either may be None."""
    u: object = None
    eta: object = None


def chi(u) -> VBSection:
    return VBSection(u=u)


def upsilon(eta) -> VBSection:
    return VBSection(eta=eta)


class VBGroupoid(Groupoid):
    def __init__(self, data, name: str | None = None):
        self.data = data
        self.group = data.group
        self.dim_c = data.dim_c
        self.dim_e = data.dim_e
        self.partial = np.asarray(data.partial, dtype=object).reshape(self.dim_e, self.dim_c)
        self.name = name or f"VB({self.group.name}; E={self.dim_e}, C={self.dim_c})"

    def _zeros_e(self):
        return np.zeros(self.dim_e, dtype=object)

    def target(self, a: VBArrow):
        return a.xi

    def source(self, a: VBArrow):
        return np.asarray(self.data.delta_c(a.g), dtype=object).T @ a.xi - self.partial.T @ a.eta

    def compose(self, a: VBArrow, b: VBArrow) -> VBArrow:
        omega = np.asarray(self.data.omega(a.g, b.g), dtype=object)
        eta = omega.T @ a.xi + np.asarray(self.data.delta_e(b.g), dtype=object).T @ a.eta + b.eta
        return VBArrow(a.xi, a.g @ b.g, eta)

    def unit(self, x) -> VBArrow:
        return VBArrow(np.asarray(x, dtype=object), self.group.identity(), self._zeros_e())

    def zero_arrow(self, g) -> VBArrow:
        return VBArrow(np.zeros(self.dim_c, dtype=object), g, self._zeros_e())

    def inverse(self, a: VBArrow) -> VBArrow:
        ginv = self.group.inverse(a.g)
        omega = np.asarray(self.data.omega(a.g, ginv), dtype=object)
        eta = -(omega.T @ a.xi) - np.asarray(self.data.delta_e(ginv), dtype=object).T @ a.eta
        return VBArrow(self.source(a), ginv, eta)

    def group_element(self, a: VBArrow):
        return a.g

    def origin(self):
        return np.zeros(self.dim_c, dtype=object)

    def random_object(self, rng):
        return rng.normal(scale=RANDOM_FIBER_SCALE, size=self.dim_c).astype(object)

    def random_arrow(self, rng, target) -> VBArrow:
        eta = rng.normal(scale=RANDOM_FIBER_SCALE, size=self.dim_e).astype(object)
        return VBArrow(np.asarray(target, dtype=object), self.group.random(rng), eta)

    def curve(self, section: VBSection, source, eps) -> VBArrow:
        """Upsilon_eta curve (xi + eps d^T eta, I, eps eta) followed by the chi_u curve
        ((Delta^C_{I - eps U})^T y, I + eps U, 0), both with the given source."""
        arrow = self.unit(source)
        if section.eta is not None:
            eta = np.asarray(section.eta, dtype=object)
            arrow = VBArrow(arrow.xi + eps * (self.partial.T @ eta), arrow.g, eps * eta)
        if section.u is not None:
            y = self.target(arrow)
            back = np.asarray(self.data.delta_c(self.group.curve(section.u, -eps)), dtype=object)
            lead = VBArrow(back.T @ y, self.group.curve(section.u, eps), self._zeros_e())
            arrow = self.compose(lead, arrow)
        return arrow

    def scale_object(self, x, lam):
        return lam * np.asarray(x, dtype=object)

    def scale_arrow(self, a: VBArrow, lam) -> VBArrow:
        return VBArrow(lam * a.xi, a.g, lam * a.eta)

    def axiom_residuals(self, rng, samples: int = 32) -> dict:
        """Associativity, units, inverses and source/target compatibility on sampled arrows."""
        out = {"associativity": 0.0, "unit": 0.0, "inverse": 0.0, "source": 0.0}

        def dist(a: VBArrow, b: VBArrow) -> float:
            parts = [a.xi - b.xi, np.asarray(a.g) - np.asarray(b.g), a.eta - b.eta]
            return max(float(np.max(np.abs(np.asarray(x, dtype=float)), initial=0.0)) for x in parts)

        for _ in range(samples):
            a, b, c = self.random_point(rng, 3).arrows
            out["associativity"] = max(out["associativity"],
                                       dist(self.compose(self.compose(a, b), c), self.compose(a, self.compose(b, c))))
            left = self.compose(self.unit(self.target(a)), a)
            right = self.compose(a, self.unit(self.source(a)))
            out["unit"] = max(out["unit"], dist(left, a), dist(right, a))
            inv = self.inverse(a)
            out["inverse"] = max(out["inverse"], dist(self.compose(a, inv), self.unit(self.target(a))))
            ab = self.compose(a, b)
            gap = np.asarray(self.source(ab) - self.source(b), dtype=float)
            out["source"] = max(out["source"], float(np.max(np.abs(gap), initial=0.0)))
        LOGGER.debug("%s axioms: %s", self.name, out)
        return out

    def check_axioms(self, rng, samples: int = 32, tol: float = AXIOM_TOL) -> dict:
        residuals = self.axiom_residuals(rng, samples)
        bad = {k: v for k, v in residuals.items() if v > tol}
        if bad:
            raise StructureError(f"{self.name} violates groupoid axioms: {bad}")
        return residuals

    def __repr__(self):
        return f"VBGroupoid({self.name!r})"


def vb_structure(data) -> VBGroupoid:
    return VBGroupoid(data)


def is_vb_cochain(phi, rng, samples: int = 32, tol: float = 1e-9) -> dict:
    """Residuals of phi(0_g, xi_1..) = 0 and phi(0_g . xi_1, ..) = phi(xi_1, ..), plus the
    consistency of "cocycle and condition 1 imply condition 2"."""
    groupoid = phi.groupoid
    p = phi.p
    zero_base = np.zeros(groupoid.dim_c, dtype=object)
    cond1 = cond2 = 0.0
    for _ in range(samples if p > 0 else 0):
        g = groupoid.group.random(rng)
        tail = groupoid.random_point(rng, p - 1, base=zero_base)
        pt = NervePoint((groupoid.zero_arrow(g),) + tail.arrows, zero_base)
        cond1 = max(cond1, float(np.max(np.abs(np.asarray(phi(pt), dtype=float)), initial=0.0)))
        rest = groupoid.random_point(rng, p, base=zero_base)
        moved = groupoid.compose(groupoid.zero_arrow(g), rest.arrows[0])
        shifted = groupoid.point((moved,) + rest.arrows[1:])
        gap = np.asarray(phi(shifted) - phi(rest), dtype=float)
        cond2 = max(cond2, float(np.max(np.abs(gap), initial=0.0)))
    dphi = simplicial_delta(phi)
    cocycle = 0.0
    for _ in range(samples):
        value = np.asarray(dphi(groupoid.random_point(rng, p + 1)), dtype=float)
        cocycle = max(cocycle, float(np.max(np.abs(value), initial=0.0)))
    report = {
        "condition1": cond1 <= tol,
        "condition2": cond2 <= tol,
        "condition1_residual": cond1,
        "condition2_residual": cond2,
        "cocycle_residual": cocycle,
    }
    report["lemma_consistent"] = not (cocycle <= tol and report["condition1"]) or report["condition2"]
    LOGGER.debug("VB-cochain check of %s: %s", phi.name, report)
    return report
