"""
Algebra side of a 2-term representation up to homotopy E -> C of a Lie algebra g.

Omega(g, E)^p = Lambda^p g* (x) E  (+)  Lambda^{p+1} g* (x) C, with C in degree -1.
The differential is defined through the graded model: 1-homogeneous cochains
of the VB-algebroid v = C* x g x E* over C*, generated by e^i in g*, the
linear coordinates of C* (weight 1) and gamma_b in E (dual to core sections).
D_g is fixed by D_g o ev = ev o (-d); its component form is

  D_g(w_E, w_C) = (d w_C + d_{nabla^E} w_E,  -d_{nabla^C} w_C - R.w_E)
  (R.w_E)(u_0..u_{p+1}) = sum_{i<j} (-1)^{i+j} R(u_i, u_j) w_E(..^u_i..^u_j..)

Anchors and brackets of v on constant sections chi_u (u in g), Upsilon_eta (eta in E*):
  rho(chi_u) = (nabla^C_u)^T xi,   rho(Upsilon_eta) = -d^T eta,
  [chi_u, chi_v] = chi_[u,v] + Upsilon_{R(u,v)^T xi},   [Upsilon_eta, chi_v] = Upsilon_{(nabla^E_v)^T eta}.
"""

import itertools
import logging
from dataclasses import dataclass
from numbers import Rational

import numpy as np

from liealgebra.algebra import LieAlgebra
from liealgebra.chevalley import ce_differential
from liealgebra.representation import Representation
from ruth.constants import SQUARE_TOL
from tensorcore.errors import DimensionError, StructureError
from tensorcore.exact import fraction_matrix, rank
from tensorcore.jets import Jet, coefficient_of, fresh_symbol, part_of
from tensorcore.tensors import AltSymTensor, alt_keys, wedge

LOGGER = logging.getLogger(__name__)


class Ruth2TermAlg:
    """(d, nabla^E, nabla^C, R) on E -> C; partial is the dim_e x dim_c matrix of C -> E.

    curvature holds R(e_i, e_j) in Hom(E, C), flattened row-major (dim_c x dim_e).
    """

    def __init__(self, algebra: LieAlgebra, dim_e: int, dim_c: int, partial, nabla_e, nabla_c,
                 curvature: AltSymTensor | None = None, name: str = "ruth"):
        self.algebra = algebra
        self.dim_e = dim_e
        self.dim_c = dim_c
        self.name = name
        partial = np.asarray(partial, dtype=object).reshape(dim_e, dim_c)
        self.partial = fraction_matrix(partial) if all(isinstance(x, Rational) for x in partial.flat) else partial
        self.nabla_e = Representation(algebra, [np.asarray(m, dtype=object).reshape(dim_e, dim_e)
                                                for m in nabla_e], f"{name}:E")
        self.nabla_c = Representation(algebra, [np.asarray(m, dtype=object).reshape(dim_c, dim_c)
                                                for m in nabla_c], f"{name}:C")
        if curvature is None:
            curvature = AltSymTensor(algebra.n, 2, 0, dim_c * dim_e)
        if (curvature.n, curvature.p, curvature.value_dim) != (algebra.n, 2, dim_c * dim_e):
            raise DimensionError(f"{name}: curvature must be a 2-form with values in Hom(E, C)")
        self.curvature = curvature

    @classmethod
    def from_representation(cls, rep: Representation) -> "Ruth2TermAlg":
        """An ordinary representation on C, concentrated in degree -1 (E = 0)."""
        n = rep.algebra.n
        return cls(rep.algebra, 0, rep.dim, np.zeros((0, rep.dim), dtype=object),
                   [np.zeros((0, 0), dtype=object)] * n, rep.rho, name=f"ruth({rep.name})")

    @property
    def exact(self) -> bool:
        values = list(self.partial.flat) + [x for v in self.curvature.coeffs.values() for x in v]
        return self.nabla_e.exact and self.nabla_c.exact and all(isinstance(x, Rational) for x in values)

    def R(self, i: int, j: int) -> np.ndarray:
        return self.curvature.get((i, j)).reshape(self.dim_c, self.dim_e)

    def R_vectors(self, u, v) -> np.ndarray:
        out = np.zeros((self.dim_c, self.dim_e), dtype=object)
        for i, ui in enumerate(u):
            for j, vj in enumerate(v):
                if i != j and ui != 0 and vj != 0:
                    out = out + ui * vj * self.R(i, j)
        return out

    def intertwining_residual(self) -> float:
        """max |d nabla^C_u - nabla^E_u d| over basis u; zero for a representation with R = 0."""
        worst = 0.0
        for a, b in zip(self.nabla_c.rho, self.nabla_e.rho):
            gap = self.partial @ a - b @ self.partial
            worst = max(worst, max((abs(complex(x)) for x in gap.flat), default=0.0))
        return worst

    def square_residual(self) -> float:
        """max |D_g(D_g w)| over basis elements in every degree."""
        worst = 0.0
        for p in range(-1, self.algebra.n):
            for omega in basis_elements(self, p):
                worst = max(worst, ruth_differential_alg(ruth_differential_alg(omega, self), self).max_abs())
        return worst

    def check(self, tol: float = SQUARE_TOL) -> float:
        residual = self.square_residual()
        limit = 0 if self.exact else tol
        LOGGER.debug("%s: D^2 residual %.3e", self.name, residual)
        if residual > limit:
            raise StructureError(f"{self.name}: D_g does not square to zero (residual {residual:.3e})")
        return residual

    def __repr__(self):
        return f"Ruth2TermAlg({self.name!r}, E={self.dim_e}, C={self.dim_c}, algebra={self.algebra.name})"


@dataclass
class OmegaElement:
    """(w_E, w_C) in Lambda^p g* (x) E (+) Lambda^{p+1} g* (x) C; w_E is None for p = -1."""
    p: int
    omega_e: AltSymTensor | None
    omega_c: AltSymTensor

    def __post_init__(self):
        if self.p < -1:
            raise DimensionError(f"degree {self.p} below -1")
        if self.omega_c.p != self.p + 1:
            raise DimensionError(f"C component of degree {self.omega_c.p} in degree {self.p}")
        if self.p == -1:
            if self.omega_e is not None:
                raise DimensionError("degree -1 carries no E component")
        elif self.omega_e is None or self.omega_e.p != self.p:
            raise DimensionError(f"E component missing or of the wrong degree in degree {self.p}")

    def _pair(self, other: "OmegaElement", op) -> "OmegaElement":
        if other.p != self.p:
            raise DimensionError("elements of different degrees")
        e = None if self.omega_e is None else op(self.omega_e, other.omega_e)
        return OmegaElement(self.p, e, op(self.omega_c, other.omega_c))

    def __add__(self, other):
        return self._pair(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._pair(other, lambda a, b: a - b)

    def __neg__(self):
        return OmegaElement(self.p, None if self.omega_e is None else -self.omega_e, -self.omega_c)

    def max_abs(self) -> float:
        e = 0.0 if self.omega_e is None else self.omega_e.max_abs()
        return max(e, self.omega_c.max_abs())

    def distance(self, other: "OmegaElement") -> float:
        return (self - other).max_abs()


def zero_element(s: Ruth2TermAlg, p: int) -> OmegaElement:
    n = s.algebra.n
    e = None if p == -1 else AltSymTensor(n, p, 0, s.dim_e)
    return OmegaElement(p, e, AltSymTensor(n, p + 1, 0, s.dim_c))


def basis_elements(s: Ruth2TermAlg, p: int):
    """Canonical basis of Omega(g, E)^p (empty where the degrees leave Lambda g*)."""
    n = s.algebra.n
    if p >= 0:
        for key in alt_keys(n, p):
            for b in range(s.dim_e):
                out = zero_element(s, p)
                out.omega_e.coeffs[(key, ())] = _unit(s.dim_e, b)
                yield out
    for key in alt_keys(n, p + 1):
        for c in range(s.dim_c):
            out = zero_element(s, p)
            out.omega_c.coeffs[(key, ())] = _unit(s.dim_c, c)
            yield out


def _unit(dim: int, i: int) -> np.ndarray:
    v = np.zeros(dim, dtype=object)
    v[i] = 1
    return v


def random_element(s: Ruth2TermAlg, p: int, rng, exact: bool = True) -> OmegaElement:
    n = s.algebra.n

    def draw(alt, sym, dim):
        values = rng.integers(-3, 4, size=dim) if exact else rng.normal(size=dim)
        return fraction_matrix([values])[0] if exact else values.astype(object)

    e = None if p == -1 else AltSymTensor.from_function(n, p, 0, s.dim_e, lambda a, b: draw(a, b, s.dim_e))
    c = AltSymTensor.from_function(n, p + 1, 0, s.dim_c, lambda a, b: draw(a, b, s.dim_c))
    return OmegaElement(p, e, c)


def curvature_action(s: Ruth2TermAlg, omega_e: AltSymTensor) -> AltSymTensor:
    """R.w_E in Lambda^{p+2} g* (x) C."""
    n, p = s.algebra.n, omega_e.p
    out = AltSymTensor(n, p + 2, 0, s.dim_c)
    if p + 2 > n:
        return out
    for key in alt_keys(n, p + 2):
        value = np.zeros(s.dim_c, dtype=object)
        for i, j in itertools.combinations(range(p + 2), 2):
            rest = tuple(key[l] for l in range(p + 2) if l not in (i, j))
            inner = omega_e.get(rest)
            if any(x != 0 for x in inner):
                value = value + (-1) ** (i + j) * (s.R(key[i], key[j]) @ inner)
        if any(x != 0 for x in value):
            out.coeffs[(key, ())] = value
    return out


def ruth_differential_alg(omega: OmegaElement, s: Ruth2TermAlg) -> OmegaElement:
    """Component formula of D_g."""
    if omega.omega_c.value_dim != s.dim_c or (omega.omega_e is not None and omega.omega_e.value_dim != s.dim_e):
        raise DimensionError(f"element does not match {s.name}")
    n = s.algebra.n
    new_e = omega.omega_c.apply(s.partial) if s.dim_e else AltSymTensor(n, omega.p + 1, 0, 0)
    new_c = -ce_differential(omega.omega_c, s.nabla_c)
    if omega.omega_e is not None:
        new_e = new_e + ce_differential(omega.omega_e, s.nabla_e)
        new_c = new_c - curvature_action(s, omega.omega_e)
    return OmegaElement(omega.p + 1, new_e, new_c)


def omega_wedge(omega: OmegaElement, beta: AltSymTensor) -> OmegaElement:
    """Right module product by a scalar form beta in Lambda g*."""
    e = None if omega.omega_e is None else wedge(omega.omega_e, beta)
    if omega.omega_e is None and beta.p > 0:
        raise DimensionError("the degree -1 part has no E slot to receive beta")
    return OmegaElement(omega.p + beta.p, e, wedge(omega.omega_c, beta))


# graded model

@dataclass
class GradedCochain:
    """Degree-`degree` 1-homogeneous cochain on v: sum e^I (x) c_I + sum e^J ^ gamma_b."""
    degree: int
    linear: AltSymTensor
    core: AltSymTensor | None

    def __post_init__(self):
        if self.linear.p != self.degree:
            raise DimensionError("linear part of the wrong degree")
        if (self.core is None) != (self.degree == 0):
            raise DimensionError("core part present exactly in positive degree")

    def value(self, sections, xi) -> object:
        """Pointwise value on sections (u_i, eta_i) at xi; multilinear and alternating in the sections."""
        if len(sections) != self.degree:
            raise DimensionError(f"degree-{self.degree} cochain on {len(sections)} sections")
        us = [u for u, _ in sections]
        total = _pair(xi, self.linear.evaluate(us))
        if self.core is not None:
            sign = (-1) ** (self.degree - 1)
            for i, (_, eta) in enumerate(sections):
                rest = us[:i] + us[i + 1:]
                total = total + (-1) ** i * sign * _pair(eta, self.core.evaluate(rest))
        return total

    def max_abs(self) -> float:
        return max(self.linear.max_abs(), 0.0 if self.core is None else self.core.max_abs())


def _pair(a, b):
    total = 0
    for x, y in zip(a, b):
        total = total + x * y
    return total


def _chi_sections(dim_e: int, vectors) -> list:
    return [(np.asarray(u, dtype=object), np.zeros(dim_e, dtype=object)) for u in vectors]


def ruth_ev(alpha: GradedCochain) -> OmegaElement:
    """Evaluate alpha on chi_u = (u, 0) and Upsilon_eta = (0, eta):

      <xi, a_C(u_0..u_p)> = alpha(chi_u0..chi_up)(xi),
      <eta, a_E(u_1..u_p)> = alpha(Upsilon_eta, chi_u1..chi_up).
    """
    linear, core = alpha.linear, alpha.core
    n, dim_c = linear.n, linear.value_dim
    dim_e = 0 if core is None else core.value_dim
    p = alpha.degree - 1

    def a_c(alt, sym):
        sections = _chi_sections(dim_e, [_unit(n, i) for i in alt])
        return [alpha.value(sections, _unit(dim_c, c)) for c in range(dim_c)]

    def a_e(alt, sym):
        rest = _chi_sections(dim_e, [_unit(n, i) for i in alt])
        origin = np.zeros(dim_c, dtype=object)
        return [alpha.value([(np.zeros(n, dtype=object), _unit(dim_e, b))] + rest, origin) for b in range(dim_e)]

    omega_e = None if core is None else AltSymTensor.from_function(n, p, 0, dim_e, a_e)
    return OmegaElement(p, omega_e, AltSymTensor.from_function(n, p + 1, 0, dim_c, a_c))


def ruth_ev_inverse(omega: OmegaElement) -> GradedCochain:
    core = None if omega.omega_e is None else omega.omega_e * (-1) ** omega.p
    return GradedCochain(omega.p + 1, omega.omega_c, core)


def graded_wedge(alpha: GradedCochain, beta: AltSymTensor) -> GradedCochain:
    """alpha ^ beta; gamma stays the last factor, (e^J ^ gamma) ^ e^K = (-1)^|K| e^J ^ e^K ^ gamma."""
    core = None if alpha.core is None else wedge(alpha.core, beta) * (-1) ** beta.p
    if alpha.core is None and beta.p > 0:
        raise DimensionError("degree-0 cochains only multiply by functions")
    return GradedCochain(alpha.degree + beta.p, wedge(alpha.linear, beta), core)


class GradedAlgebroid:
    """Anchor and bracket of v on constant sections, with xi a vector of linear jets."""

    def __init__(self, s: Ruth2TermAlg):
        self.s = s
        self.names = [fresh_symbol("xi") for _ in range(s.dim_c)]
        self.xi = np.array([Jet.variable(name) for name in self.names], dtype=object)

    def basis(self):
        s = self.s
        n = s.algebra.n
        chis = [(_unit(n, i), np.zeros(s.dim_e, dtype=object)) for i in range(n)]
        ups = [(np.zeros(n, dtype=object), _unit(s.dim_e, b)) for b in range(s.dim_e)]
        return chis, ups

    def anchor(self, section) -> np.ndarray:
        u, eta = section
        s = self.s
        out = -(s.partial.T @ eta) if s.dim_e else np.zeros(s.dim_c, dtype=object)
        for ui, m in zip(u, s.nabla_c.rho):
            if ui != 0:
                out = out + ui * (m.T @ self.xi)
        return out

    def bracket(self, x, y):
        (u, eta), (v, theta) = x, y
        s = self.s
        new_u = s.algebra.bracket(u, v)
        new_eta = s.R_vectors(u, v).T @ self.xi if s.dim_e else np.zeros(0, dtype=object)
        for ui, m in zip(u, s.nabla_e.rho):
            if ui != 0:
                new_eta = new_eta - ui * (m.T @ theta)
        for vi, m in zip(v, s.nabla_e.rho):
            if vi != 0:
                new_eta = new_eta + vi * (m.T @ eta)
        return new_u, new_eta

    def derive(self, f, vector):
        """df(vector) for f affine in xi."""
        total = 0
        for name, v in zip(self.names, vector):
            total = total + part_of(f, name, 1) * v
        return total

    def read_linear(self, f) -> np.ndarray:
        return np.array([coefficient_of(f, {name: 1}) for name in self.names], dtype=object)


def graded_differential(alpha: GradedCochain, s: Ruth2TermAlg) -> GradedCochain:
    """Koszul differential of v on a 1-homogeneous cochain, evaluated on basis sections."""
    model = GradedAlgebroid(s)
    n, deg = s.algebra.n, alpha.degree
    chis, ups = model.basis()

    def d_alpha(sections):
        total = 0
        for i, x in enumerate(sections):
            rest = sections[:i] + sections[i + 1:]
            total = total + (-1) ** i * model.derive(alpha.value(rest, model.xi), model.anchor(x))
        for i, j in itertools.combinations(range(len(sections)), 2):
            rest = [sections[l] for l in range(len(sections)) if l not in (i, j)]
            bracket = model.bracket(sections[i], sections[j])
            total = total + (-1) ** (i + j) * alpha.value([bracket] + rest, model.xi)
        return total

    linear = AltSymTensor(n, deg + 1, 0, s.dim_c)
    if deg + 1 <= n:
        for key in alt_keys(n, deg + 1):
            value = model.read_linear(d_alpha([chis[i] for i in key]))
            if any(x != 0 for x in value):
                linear.coeffs[(key, ())] = value
    core = AltSymTensor(n, deg, 0, s.dim_e)
    sign = (-1) ** deg
    for key in alt_keys(n, deg):
        value = np.array([coefficient_of(d_alpha([ups[b]] + [chis[i] for i in key]), {})
                          for b in range(s.dim_e)], dtype=object)
        if any(x != 0 for x in value):
            core.coeffs[(key, ())] = sign * value
    return GradedCochain(deg + 1, linear, core)


def ruth_differential_graded(omega: OmegaElement, s: Ruth2TermAlg) -> OmegaElement:
    """ev o (-d) o ev^-1."""
    d = graded_differential(ruth_ev_inverse(omega), s)
    return -ruth_ev(d)


def ruth_matrix(s: Ruth2TermAlg, p: int) -> np.ndarray:
    """Matrix of D_g: Omega^p -> Omega^{p+1} in the basis of basis_elements."""
    columns = []
    for omega in basis_elements(s, p):
        image = ruth_differential_alg(omega, s)
        columns.append(_flatten(image))
    rows = len(list(basis_elements(s, p + 1)))
    out = np.zeros((rows, len(columns)), dtype=object)
    for j, col in enumerate(columns):
        out[:, j] = col
    return out


def _flatten(omega: OmegaElement) -> list:
    out = [] if omega.omega_e is None else omega.omega_e.to_vector()
    return out + omega.omega_c.to_vector()


def ruth_cohomology_dims(s: Ruth2TermAlg) -> list:
    """dim H^p(Omega(g, E), D_g) for p = -1..n by exact ranks."""
    if not s.exact:
        raise StructureError(f"{s.name}: cohomology needs exact data")
    degrees = range(-1, s.algebra.n + 1)
    dims = [len(list(basis_elements(s, p))) for p in degrees]
    ranks = []
    for p in degrees:
        matrix = ruth_matrix(s, p)
        ranks.append(rank(matrix) if matrix.size else 0)
    betti = []
    for idx in range(len(dims)):
        incoming = ranks[idx - 1] if idx > 0 else 0
        betti.append(dims[idx] - ranks[idx] - incoming)
    LOGGER.debug("%s: Omega dims %s ranks %s", s.name, dims, ranks)
    return betti
