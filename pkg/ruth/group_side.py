"""
Group side of a 2-term representation up to homotopy: quasi-actions Delta^E, Delta^C,
a map d: C -> E and Omega: G x G -> Hom(E, C).

The data defines the VB-groupoid V = s*E* (+) t*C* (see groupworld.vb), and
C(G, E)^p = {mu = (mu_E, mu_C)} with mu_E on B_pG, mu_C on B_{p+1}G, normalized.
  Psi(mu)(a_1..a_{p+1}) = <eta_1, mu_E(g_2..g_{p+1})> + <xi_1, mu_C(g_1..g_{p+1})>
identifies C(G, E) with the 1-homogeneous VB-cochains, and D_G = -Psi^-1 o delta o Psi.
"""

import logging

import numpy as np

from groupworld.cochains import Cochain, cup, simplicial_delta
from groupworld.groupoids import ActionArrow, lie_group
from groupworld.groups import GroupRep, MatrixGroup
from groupworld.vb import VBArrow, VBGroupoid
from ruth.algebra_side import Ruth2TermAlg
from ruth.constants import IMAGE_TOL, NORMALIZATION_TOL, SAMPLES
from liealgebra.representation import differentiate as differentiate_rep
from tensorcore.errors import DimensionError, NormalizationError, StructureError
from tensorcore.jets import Jet, coefficient_of, fresh_symbol
from tensorcore.tensors import AltSymTensor, alt_keys, as_vector

LOGGER = logging.getLogger(__name__)


class Ruth2TermGrp:
    """Normalized RUTH data: Delta(1) = 1 and Omega(g, 1) = Omega(1, g) = 0.

    Every map must accept matrices with jet entries.
    """

    def __init__(self, group: MatrixGroup, dim_e: int, dim_c: int, partial, delta_e, delta_c, omega=None,
                 name: str = "ruth"):
        self.group = group
        self.dim_e = dim_e
        self.dim_c = dim_c
        self.partial = np.asarray(partial, dtype=object).reshape(dim_e, dim_c)
        self._delta_e = delta_e
        self._delta_c = delta_c
        self._omega = omega
        self.name = name
        self._groupoid = None

    @classmethod
    def from_representations(cls, rep_e: GroupRep | None, rep_c: GroupRep, partial=None,
                             name: str | None = None) -> "Ruth2TermGrp":
        """Two representations and an intertwiner d: C -> E; Omega = 0."""
        if rep_e is None:
            return cls(rep_c.group, 0, rep_c.dim, np.zeros((0, rep_c.dim)), lambda g: np.zeros((0, 0)), rep_c,
                       name=name or f"ruth({rep_c.name})")
        if partial is None:
            partial = np.zeros((rep_e.dim, rep_c.dim))
        return cls(rep_c.group, rep_e.dim, rep_c.dim, partial, rep_e, rep_c,
                   name=name or f"ruth({rep_e.name}<-{rep_c.name})")

    def delta_e(self, g) -> np.ndarray:
        return np.asarray(self._delta_e(g), dtype=object).reshape(self.dim_e, self.dim_e)

    def delta_c(self, g) -> np.ndarray:
        return np.asarray(self._delta_c(g), dtype=object).reshape(self.dim_c, self.dim_c)

    def omega(self, g1, g2) -> np.ndarray:
        if self._omega is None:
            return np.zeros((self.dim_c, self.dim_e), dtype=object)
        return np.asarray(self._omega(g1, g2), dtype=object).reshape(self.dim_c, self.dim_e)

    def delta_e_rep(self) -> GroupRep:
        return GroupRep(self.group, self.dim_e, self.delta_e, f"{self.name}:DeltaE")

    def delta_c_rep(self) -> GroupRep:
        return GroupRep(self.group, self.dim_c, self.delta_c, f"{self.name}:DeltaC")

    @property
    def groupoid(self) -> VBGroupoid:
        if self._groupoid is None:
            self._groupoid = VBGroupoid(self, f"V({self.name})")
        return self._groupoid

    def gauge(self, transform, name: str | None = None) -> "Ruth2TermGrp":
        """Gauge transform by L: G -> Hom(E, C) with L(1) = 0:
          Delta'^C = Delta^C + L d,  Delta'^E = Delta^E + d L,
          Omega'(g1, g2) = Omega + L(g1 g2) - L(g1) Delta^E(g2) - Delta^C(g1) L(g2) - L(g1) d L(g2).
        The VB-groupoid changes by the isomorphism (xi, g, eta) -> (xi, g, eta + L(g)^T xi)."""
        d = self.partial

        def lmap(g):
            return np.asarray(transform(g), dtype=object).reshape(self.dim_c, self.dim_e)

        def omega(g1, g2):
            l1, l2 = lmap(g1), lmap(g2)
            return (self.omega(g1, g2) + lmap(g1 @ g2) - l1 @ self.delta_e(g2)
                    - self.delta_c(g1) @ l2 - l1 @ d @ l2)

        return Ruth2TermGrp(self.group, self.dim_e, self.dim_c, d,
                            lambda g: self.delta_e(g) + d @ lmap(g),
                            lambda g: self.delta_c(g) + lmap(g) @ d,
                            omega, name or f"gauge({self.name})")

    def normalization_residual(self, rng, samples: int = SAMPLES) -> float:
        identity = self.group.identity()
        worst = 0.0
        parts = [self.delta_e(identity) - np.eye(self.dim_e), self.delta_c(identity) - np.eye(self.dim_c)]
        for _ in range(samples):
            g = self.group.random(rng)
            parts += [self.omega(g, identity), self.omega(identity, g)]
        for part in parts:
            worst = max(worst, float(np.max(np.abs(np.asarray(part, dtype=float)), initial=0.0)))
        return worst

    def check(self, rng, samples: int = SAMPLES) -> dict:
        residual = self.normalization_residual(rng, samples)
        if residual > NORMALIZATION_TOL:
            raise StructureError(f"{self.name}: data is not normalized (residual {residual:.3e})")
        axioms = self.groupoid.check_axioms(rng, samples)
        return {"normalization": residual, **axioms}

    def __repr__(self):
        return f"Ruth2TermGrp({self.name!r}, E={self.dim_e}, C={self.dim_c}, group={self.group.name})"


class RuthCochain:
    """mu = (mu_E, mu_C) of degree p >= -1; mu_E(gs) takes p group elements, mu_C(gs) takes p + 1."""

    def __init__(self, ruth: Ruth2TermGrp, p: int, mu_e, mu_c, name: str = "mu"):
        if p < -1:
            raise DimensionError(f"RUTH cochain of degree {p}")
        if (mu_e is None) != (p == -1):
            raise DimensionError("the E component is present exactly in degree >= 0")
        self.ruth = ruth
        self.p = p
        self._mu_e = mu_e
        self._mu_c = mu_c
        self.name = name

    def mu_e(self, gs) -> np.ndarray:
        gs = tuple(gs)
        if len(gs) != self.p:
            raise DimensionError(f"{self.name}: E component takes {self.p} elements, got {len(gs)}")
        return as_vector(self._mu_e(gs), self.ruth.dim_e)

    def mu_c(self, gs) -> np.ndarray:
        gs = tuple(gs)
        if len(gs) != self.p + 1:
            raise DimensionError(f"{self.name}: C component takes {self.p + 1} elements, got {len(gs)}")
        return as_vector(self._mu_c(gs), self.ruth.dim_c)

    def _combine(self, other: "RuthCochain", op, name: str) -> "RuthCochain":
        if other.ruth is not self.ruth or other.p != self.p:
            raise DimensionError(f"{self.name} and {other.name} live in different spaces")
        mu_e = None if self.p == -1 else (lambda gs: op(self.mu_e(gs), other.mu_e(gs)))
        return RuthCochain(self.ruth, self.p, mu_e, lambda gs: op(self.mu_c(gs), other.mu_c(gs)), name)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b, f"({self.name}+{other.name})")

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b, f"({self.name}-{other.name})")

    def __mul__(self, scalar) -> "RuthCochain":
        mu_e = None if self.p == -1 else (lambda gs: scalar * self.mu_e(gs))
        return RuthCochain(self.ruth, self.p, mu_e, lambda gs: scalar * self.mu_c(gs), f"{scalar}*{self.name}")

    __rmul__ = __mul__

    def __neg__(self):
        return -1 * self

    def normalization_residual(self, rng, samples: int = SAMPLES) -> float:
        """max |mu(.., 1, ..)| over sampled degenerate tuples of both components."""
        group = self.ruth.group
        identity = group.identity()
        worst = 0.0
        for _ in range(samples):
            for size, fn in ((self.p, self.mu_e), (self.p + 1, self.mu_c)):
                if size <= 0:
                    continue
                gs = [group.random(rng) for _ in range(size - 1)]
                for i in range(size):
                    value = fn(gs[:i] + [identity] + gs[i:])
                    worst = max(worst, max((abs(complex(x)) for x in value), default=0.0))
        return worst

    def check_normalized(self, rng, samples: int = SAMPLES, tol: float = NORMALIZATION_TOL) -> float:
        residual = self.normalization_residual(rng, samples)
        if residual > tol:
            raise NormalizationError(f"{self.name} is not normalized (residual {residual:.3e})")
        return residual

    def __repr__(self):
        return f"RuthCochain({self.name!r}, p={self.p}, on={self.ruth.name})"


def zero_ruth_cochain(ruth: Ruth2TermGrp, p: int) -> RuthCochain:
    mu_e = None if p == -1 else (lambda gs: np.zeros(ruth.dim_e, dtype=object))
    return RuthCochain(ruth, p, mu_e, lambda gs: np.zeros(ruth.dim_c, dtype=object), "0")


def _pair(a, b):
    total = 0
    for x, y in zip(a, b):
        total = total + x * y
    return total


def psi(mu: RuthCochain, rng=None) -> Cochain:
    """Psi(mu) as a scalar (p+1)-cochain on V; with rng the normalization of mu is checked first."""
    if rng is not None:
        mu.check_normalized(rng)
    groupoid = mu.ruth.groupoid

    def fn(pt):
        if not pt.arrows:
            return _pair(pt.base, mu.mu_c(()))
        first = pt.arrows[0]
        gs = tuple(a.g for a in pt.arrows)
        return _pair(first.eta, mu.mu_e(gs[1:])) + _pair(first.xi, mu.mu_c(gs))

    return Cochain(groupoid, mu.p + 1, fn, 1, None, f"Psi({mu.name})")


def _chain(groupoid: VBGroupoid, xi, gs, first_eta) -> tuple:
    """Composable arrows (xi, g_1, first_eta), (s(a_1), g_2, 0), ..."""
    zeros = np.zeros(groupoid.dim_e, dtype=object)
    arrows = []
    target = np.asarray(xi, dtype=object)
    for i, g in enumerate(gs):
        a = VBArrow(target, g, first_eta if i == 0 else zeros)
        arrows.append(a)
        target = groupoid.source(a)
    return tuple(arrows)


def _unit(dim: int, i: int) -> np.ndarray:
    v = np.zeros(dim, dtype=object)
    v[i] = 1
    return v


def psi_inverse(phi: Cochain, ruth: Ruth2TermGrp) -> RuthCochain:
    """Read (mu_E, mu_C) off a 1-homogeneous VB-cochain of degree p + 1.

    mu_C from xi_1 = e^c with every eta zero; mu_E from (0, 1, e_b) as first arrow.
    """
    groupoid = ruth.groupoid
    if phi.groupoid is not groupoid:
        raise DimensionError(f"{phi.name} is not a cochain on {groupoid.name}")
    p = phi.p - 1
    zero_e = np.zeros(ruth.dim_e, dtype=object)

    def mu_c(gs):
        out = np.zeros(ruth.dim_c, dtype=object)
        for c in range(ruth.dim_c):
            xi = _unit(ruth.dim_c, c)
            out[c] = phi(groupoid.point(_chain(groupoid, xi, gs, zero_e), xi))[0]
        return out

    def mu_e(gs):
        out = np.zeros(ruth.dim_e, dtype=object)
        gs = (ruth.group.identity(),) + tuple(gs)
        for b in range(ruth.dim_e):
            arrows = _chain(groupoid, np.zeros(ruth.dim_c, dtype=object), gs, _unit(ruth.dim_e, b))
            out[b] = phi(groupoid.point(arrows))[0]
        return out

    return RuthCochain(ruth, p, mu_e if p >= 0 else None, mu_c, f"Psi^-1({phi.name})")


def image_residual(phi: Cochain, ruth: Ruth2TermGrp, rng, samples: int = SAMPLES) -> float:
    """max |phi - Psi(Psi^-1 phi)| on random points; zero exactly on the image of Psi."""
    rebuilt = psi(psi_inverse(phi, ruth))
    worst = 0.0
    for _ in range(samples):
        pt = ruth.groupoid.random_point(rng, phi.p)
        gap = np.asarray(phi(pt) - rebuilt(pt), dtype=float)
        worst = max(worst, float(np.max(np.abs(gap), initial=0.0)))
    return worst


def ruth_differential_grp(mu: RuthCochain, rng=None) -> RuthCochain:
    """D_G mu = -Psi^-1(delta Psi(mu)); with rng, delta Psi(mu) is checked to stay in the image of Psi."""
    d_psi = simplicial_delta(psi(mu))
    if rng is not None:
        residual = image_residual(d_psi, mu.ruth, rng)
        LOGGER.debug("D_G(%s): image residual %.3e", mu.name, residual)
        if residual > IMAGE_TOL:
            raise StructureError(f"{mu.ruth.name}: delta Psi leaves the image of Psi (residual {residual:.3e});"
                                 " the RUTH data is inconsistent")
    out = -psi_inverse(d_psi, mu.ruth)
    out.name = f"D({mu.name})"
    return out


def group_point(gs) -> tuple:
    """Arrows of the Lie group (as a groupoid over a point) for a tuple of elements."""
    empty = np.zeros(0, dtype=object)
    return tuple(ActionArrow(g, empty) for g in gs)


def star(mu: RuthCochain, f: Cochain) -> RuthCochain:
    """(mu * f)_E = mu_E(g_1..g_p) f(g_{p+1}..),  (mu * f)_C = mu_C(g_1..g_{p+1}) f(g_{p+2}..)."""
    if f.value_dim != 1:
        raise DimensionError("the module product takes a scalar group cochain")
    lg = f.groupoid
    q = f.p

    def value(gs):
        return f(lg.point(group_point(gs), np.zeros(0, dtype=object)))[0]

    def mu_e(gs):
        if mu.p == -1:
            return np.zeros(mu.ruth.dim_e, dtype=object)
        return mu.mu_e(gs[:mu.p]) * value(gs[mu.p:])

    def mu_c(gs):
        return mu.mu_c(gs[:mu.p + 1]) * value(gs[mu.p + 1:])

    return RuthCochain(mu.ruth, mu.p + q, mu_e if mu.p + q >= 0 else None, mu_c, f"{mu.name}*{f.name}")


def pullback(f: Cochain, ruth: Ruth2TermGrp) -> Cochain:
    """A group cochain as a cochain on V through (xi, g, eta) -> g."""
    lg = f.groupoid
    empty = np.zeros(0, dtype=object)
    return Cochain(ruth.groupoid, f.p,
                   lambda pt: f(lg.point(group_point(a.g for a in pt.arrows), empty)), 1, None, f"pi*{f.name}")


def star_residual(mu: RuthCochain, f: Cochain, rng, samples: int = SAMPLES) -> float:
    """max |Psi(mu * f) - Psi(mu) * pi*f| on random points."""
    lhs = psi(star(mu, f))
    rhs = cup(psi(mu), pullback(f, mu.ruth))
    worst = 0.0
    for _ in range(samples):
        pt = mu.ruth.groupoid.random_point(rng, lhs.p)
        worst = max(worst, float(np.max(np.abs(np.asarray(lhs(pt) - rhs(pt), dtype=float)), initial=0.0)))
    return worst


def scalar_group_cochain(group: MatrixGroup, q: int, fn, name: str = "f") -> Cochain:
    """Scalar q-cochain on G from fn(g_1, .., g_q)."""
    return Cochain(lie_group(group), q, lambda pt: fn(*(a.g for a in pt.arrows)), 1, None, name)


def _mixed_omega(ruth: Ruth2TermGrp, u, v) -> np.ndarray:
    """d^2/deps1 deps2 Omega(1 + eps1 U, 1 + eps2 V) at 0."""
    e1, e2 = fresh_symbol("w"), fresh_symbol("w")
    group = ruth.group
    value = ruth.omega(group.curve(u, Jet.variable(e1)), group.curve(v, Jet.variable(e2)))
    out = np.empty(value.shape, dtype=object)
    for idx, x in np.ndenumerate(value):
        out[idx] = coefficient_of(x, {e1: 1, e2: 1})
    return out.astype(float)


def differentiate(ruth: Ruth2TermGrp) -> Ruth2TermAlg:
    """Lie data: d unchanged, nabla = d Delta, R(u, v) = Omega_12(u, v) - Omega_12(v, u)."""
    algebra = ruth.group.algebra
    n = algebra.n
    nabla_e = differentiate_rep(algebra, ruth.delta_e, f"d{ruth.name}:E").rho if ruth.dim_e else \
        [np.zeros((0, 0))] * n
    nabla_c = differentiate_rep(algebra, ruth.delta_c, f"d{ruth.name}:C").rho
    curvature = AltSymTensor(n, 2, 0, ruth.dim_c * ruth.dim_e)
    for i, j in alt_keys(n, 2):
        u, v = algebra.basis_vector(i), algebra.basis_vector(j)
        value = (_mixed_omega(ruth, u, v) - _mixed_omega(ruth, v, u)).reshape(-1)
        if np.max(np.abs(value), initial=0.0) > 0:
            curvature.coeffs[((i, j), ())] = value.astype(object)
    partial = np.asarray(ruth.partial, dtype=float)
    return Ruth2TermAlg(algebra, ruth.dim_e, ruth.dim_c, partial, nabla_e, nabla_c, curvature,
                        f"d{ruth.name}")
