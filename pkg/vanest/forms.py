"""
Differential forms on the nerve of G x R^n with values in C, and the Van Est
map to the Weil complex.

A point of B_p is (g_1..g_p, x) with x = t(g_1); a tangent vector there is
(X_1..X_p, xdot) with X_i right-trivialized (the actual vector is X_i g_i).
The action is the group representation phi of the base; arrows are
g: phi(g)^-1 x -> x, so B(X) = d phi(X) is minus the anchor.

Faces on tangents:
  d_0: drops X_1, x -> phi(g_1)^-1 x, xdot -> phi(g_1)^-1 (xdot - B(X_1) x)
  d_i: X_i, X_{i+1} -> X_i + g_i X_{i+1} g_i^-1
  d_p: drops X_p

R_u w(Q) = d/deps Delta(b^-1) w(b, Q) with b = I + eps u(x) ending at phi(b) x,
J_v w(Q) = w(s_0 Q)(B_p v, s_0 tangents), B_p v = (V, 0.., B(V) x).
"""

import logging
from dataclasses import dataclass

import numpy as np

from groupworld.cochains import Cochain
from groupworld.groupoids import ActionArrow, NervePoint, linear_action
from groupworld.groups import trivial_rep
from tensorcore.errors import DimensionError, StructureError
from tensorcore.jets import Jet, fresh_symbol, part_array
from tensorcore.permutations import epsilon_sign, permutations_with_sign
from tensorcore.tensors import as_vector
from vanest.operators import DEFAULT_CONTEXT, VEContext
from weil.complex import LinearActionBase, WeilElement
from weil.constants import DEFAULT_POLY_DEGREE
from weil.polyform import PolyForm

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class NerveTangent:
    xs: tuple
    xdot: np.ndarray


class FormCochain:
    """A q-form on B_p(G x R^n) with values in C: fn(gs, x, tangents) -> vector.

    fn must be multilinear and alternating in the q tangents; FormCochain.check samples both.
    """

    def __init__(self, base: LinearActionBase, p: int, q: int, fn, name: str = "w"):
        if p < 0 or q < 0:
            raise DimensionError(f"invalid form bidegree ({p}, {q})")
        if base.phi is None or base.delta is None:
            raise StructureError(f"{base.name}: forms need the group action, build the base from group reps")
        self.base = base
        self.group = base.phi.group
        self.p = p
        self.q = q
        self.fn = fn
        self.name = name
        self.value_dim = base.rep.dim

    def __call__(self, gs, x, tangents) -> np.ndarray:
        gs, tangents = tuple(gs), list(tangents)
        if len(gs) != self.p or len(tangents) != self.q:
            raise DimensionError(f"{self.name}: ({self.p},{self.q})-form at {len(gs)} arrows, {len(tangents)} tangents")
        return as_vector(self.fn(gs, np.asarray(x, dtype=object), tangents), self.value_dim)

    def like(self, p: int, q: int, fn, name: str) -> "FormCochain":
        return FormCochain(self.base, p, q, fn, name)

    @property
    def groupoid(self):
        return linear_action(self.base.phi)

    def _check_compatible(self, other: "FormCochain"):
        if self.base is not other.base or (self.p, self.q) != (other.p, other.q):
            raise DimensionError(f"forms {self.name} and {other.name} live in different spaces")

    def __add__(self, other: "FormCochain") -> "FormCochain":
        self._check_compatible(other)
        return self.like(self.p, self.q, lambda gs, x, ts: self(gs, x, ts) + other(gs, x, ts),
                         f"({self.name}+{other.name})")

    def __sub__(self, other: "FormCochain") -> "FormCochain":
        self._check_compatible(other)
        return self.like(self.p, self.q, lambda gs, x, ts: self(gs, x, ts) - other(gs, x, ts),
                         f"({self.name}-{other.name})")

    def __mul__(self, scalar) -> "FormCochain":
        return self.like(self.p, self.q, lambda gs, x, ts: scalar * self(gs, x, ts), f"{scalar}*{self.name}")

    __rmul__ = __mul__

    def check(self, rng, samples: int = 4) -> dict:
        """Sampled multilinearity, alternation and normalization residuals."""
        report = {"multilinear": 0.0, "alternating": 0.0, "normalized": 0.0}
        n_M = self.base.n_M
        zero = np.zeros((self.group.size, self.group.size))
        for _ in range(samples):
            gs, x = random_nerve_point(self, self.p, rng)
            ts = random_tangents(self, self.p, self.q, rng)
            value = self(gs, x, ts)
            if self.q >= 1:
                extra = random_tangents(self, self.p, 1, rng)[0]
                a, b = rng.normal(size=2)
                mixed = NerveTangent(tuple(a * u + b * v for u, v in zip(ts[0].xs, extra.xs)),
                                     a * ts[0].xdot + b * extra.xdot)
                gap = self(gs, x, [mixed] + ts[1:]) - a * value - b * self(gs, x, [extra] + ts[1:])
                report["multilinear"] = max(report["multilinear"], _max_abs(gap))
            if self.q >= 2:
                gap = self(gs, x, [ts[1], ts[0]] + ts[2:]) + value
                report["alternating"] = max(report["alternating"], _max_abs(gap))
            if self.p >= 1:
                low, x0 = random_nerve_point(self, self.p - 1, rng)
                lts = random_tangents(self, self.p - 1, self.q, rng)
                for i in range(self.p):
                    degenerate = low[:i] + (self.group.identity(),) + low[i:]
                    pushed = [NerveTangent(t.xs[:i] + (zero,) + t.xs[i:], t.xdot) for t in lts]
                    report["normalized"] = max(report["normalized"], _max_abs(self(degenerate, x0, pushed)))
        LOGGER.debug("%s checks on %d samples (n_M=%d): %s", self.name, samples, n_M, report)
        return report

    def __repr__(self):
        return f"FormCochain({self.name!r}, p={self.p}, q={self.q}, base={self.base.name!r})"


def _max_abs(v) -> float:
    return max((abs(complex(x)) for x in np.asarray(v, dtype=object).flat), default=0.0)


def random_nerve_point(w: FormCochain, p: int, rng) -> tuple:
    return tuple(w.group.random(rng) for _ in range(p)), rng.normal(size=w.base.n_M).astype(object)


def random_tangents(w: FormCochain, p: int, q: int, rng) -> list:
    algebra = w.group.algebra
    return [NerveTangent(tuple(np.asarray(algebra.element_matrix(rng.normal(size=algebra.n)), dtype=float)
                               for _ in range(p)), rng.normal(size=w.base.n_M).astype(object))
            for _ in range(q)]


def sampled_form_gap(a: FormCochain, b: FormCochain, rng, samples: int = 4) -> float:
    a._check_compatible(b)
    worst = 0.0
    for _ in range(samples):
        gs, x = random_nerve_point(a, a.p, rng)
        ts = random_tangents(a, a.p, a.q, rng)
        worst = max(worst, _max_abs(a(gs, x, ts) - b(gs, x, ts)))
    return worst


def _dphi(base: LinearActionBase, X) -> np.ndarray:
    """B(X) = d/dtau phi(I + tau X)."""
    tau = Jet.variable(fresh_symbol("dphi"))
    g = np.eye(X.shape[0], dtype=float).astype(object) + tau * np.asarray(X, dtype=object)
    return part_array(base.phi(g), tau.symbols[0], 1)


def _phi_inverse(w: FormCochain, g) -> np.ndarray:
    return w.base.phi(w.group.inverse(g))


def delta_form(w: FormCochain) -> FormCochain:
    """(delta w) = Delta_{g_1} d_0^* w + sum_{i>=1} (-1)^i d_i^* w on B_{p+1}."""
    p = w.p

    def fn(gs, x, tangents):
        g1 = gs[0]
        back = _phi_inverse(w, g1)
        moved = [NerveTangent(t.xs[1:], back @ (t.xdot - _dphi(w.base, t.xs[0]) @ x)) for t in tangents]
        total = w.base.delta(g1) @ w(gs[1:], back @ x, moved)
        for i in range(1, p + 1):
            gi = gs[i - 1]
            ginv = w.group.inverse(gi)
            merged = gs[:i - 1] + (gi @ gs[i],) + gs[i + 1:]
            ts = [NerveTangent(t.xs[:i - 1] + (t.xs[i - 1] + gi @ t.xs[i] @ ginv,) + t.xs[i + 1:], t.xdot)
                  for t in tangents]
            total = total + (-1) ** i * w(merged, x, ts)
        dropped = [NerveTangent(t.xs[:-1], t.xdot) for t in tangents]
        return total + (-1) ** (p + 1) * w(gs[:-1], x, dropped)

    return w.like(p + 1, w.q, fn, f"d{w.name}")


def _objects(w: FormCochain, gs, x) -> list:
    """x_0 = x = t(g_1) and x_i = s(g_i)."""
    objects = [np.asarray(x, dtype=object)]
    for g in gs:
        objects.append(_phi_inverse(w, g) @ objects[-1])
    return objects


def form_star(w: FormCochain, f: Cochain) -> FormCochain:
    """(w * f)(g_1..g_{p+p'}) = w(g_1..g_p) f(g_{p+1}..) for a scalar function f on the action groupoid."""
    if f.value_dim != 1:
        raise DimensionError("the function factor must be scalar")
    if f.groupoid.base_dim != w.base.n_M or f.groupoid.group is not w.group:
        raise DimensionError(f"{f.name} lives on another groupoid")
    p = w.p

    def fn(gs, x, tangents):
        left = w(gs[:p], x, [NerveTangent(t.xs[:p], t.xdot) for t in tangents])
        objects = _objects(w, gs, x)
        back = NervePoint(tuple(ActionArrow(g, t) for g, t in zip(gs[p:], objects[p:])), objects[p])
        return left * f(back)[0]

    return w.like(p + f.p, w.q, fn, f"{w.name}*{f.name}")


def _section_at(w: FormCochain, section, x) -> np.ndarray:
    u = section(x) if callable(section) else section
    u = np.asarray(u, dtype=object).reshape(-1)
    if u.shape != (w.group.algebra.n,):
        raise DimensionError(f"section value of shape {u.shape} for an algebra of dimension {w.group.algebra.n}")
    return u


def R_form(section, w: FormCochain) -> FormCochain:
    """R_u on forms; section is a coefficient vector or a polynomial map x -> u(x)."""
    if w.p < 1:
        raise DimensionError("R_u needs simplicial degree >= 1")
    group, phi = w.group, w.base.phi

    def fn(gs, x, tangents):
        eps = Jet.variable(fresh_symbol("r"))
        b = group.curve(_section_at(w, section, x), eps)
        moved = []
        for t in tangents:
            tau = Jet.variable(fresh_symbol("tau"))
            x_tau = x + tau * t.xdot
            b_tau = group.curve(_section_at(w, section, x_tau), eps)
            xb = part_array(b_tau, tau.symbols[0], 1) @ group.inverse(b)
            xdot = part_array(phi(b_tau) @ x_tau, tau.symbols[0], 1)
            moved.append(NerveTangent((xb,) + t.xs, xdot))
        value = w.base.delta(group.inverse(b)) @ w((b,) + gs, phi(b) @ x, moved)
        return part_array(value, eps.symbols[0], 1)

    return w.like(w.p - 1, w.q, fn, f"R({w.name})")


def J(section, w: FormCochain) -> FormCochain:
    """Contraction with B_p v followed by the pullback along s_0."""
    if w.p < 1 or w.q < 1:
        raise DimensionError(f"J needs p >= 1 and q >= 1, got ({w.p}, {w.q})")
    group = w.group
    size = group.size

    def fn(gs, x, tangents):
        V = np.asarray(group.algebra.element_matrix(_section_at(w, section, x)), dtype=object)
        zero = np.zeros((size, size), dtype=object)
        first = NerveTangent((V,) + (zero,) * len(gs), _dphi(w.base, V) @ x)
        rest = [NerveTangent((zero,) + t.xs, t.xdot) for t in tangents]
        return w((group.identity().astype(object),) + gs, x, [first] + rest)

    return w.like(w.p - 1, w.q - 1, fn, f"J({w.name})")


def _operator(kind: str, index: int, w: FormCochain) -> FormCochain:
    e = w.group.algebra.basis_vector(index)
    return J(e, w) if kind == "J" else R_form(e, w)


def ve_omega_component(w: FormCochain, ukey: tuple, vkey: tuple) -> FormCochain:
    """sum_sigma sgn(sigma) (-1)^eps(sigma,k) D_sigma(p) .. D_sigma(1) w on B_0, D_j = J_{v_j} for j <= k."""
    k = len(vkey)
    ops = [("J", v) for v in vkey] + [("R", u) for u in ukey]
    p = len(ops)
    if p != w.p:
        raise DimensionError(f"{len(ukey)}|{k} slots for simplicial degree {w.p}")
    built = {(): w}

    def compose(order):
        # prefixes shared between permutations are composed once
        if order not in built:
            kind, index = ops[order[-1]]
            built[order] = _operator(kind, index, compose(order[:-1]))
        return built[order]

    terms = []
    for perm in permutations_with_sign(p):
        sign = perm.sign * epsilon_sign(perm.sigma, k)
        terms.append((sign, compose(tuple(perm.sigma))))

    def fn(gs, x, tangents):
        total = np.zeros(w.value_dim, dtype=object)
        for sign, term in terms:
            total = total + sign * term(gs, x, tangents)
        return total

    return w.like(0, w.q - k, fn, f"c{k}({w.name})")


def VE_Omega(w: FormCochain, ctx: VEContext = DEFAULT_CONTEXT) -> WeilElement:
    """Van Est image of w in W^{p,q}, with polynomial coefficients read off at a jet base point."""
    ctx.require(w.p)
    base = w.base

    def read_off(ukey, vkey):
        component = ve_omega_component(w, ukey, vkey)

        def fn(x, vectors):
            return component((), x, [NerveTangent((), v) for v in vectors])

        return PolyForm.from_function(base.n_M, component.q, w.value_dim, fn, base.max_degree)

    out = WeilElement.from_function(base, w.p, w.q, read_off)
    LOGGER.debug("VE_Omega(%s): %d nonzero components in W^(%d,%d)", w.name, len(out.components), w.p, w.q)
    return out


def forms_base(group, delta, phi=None, max_degree: int = DEFAULT_POLY_DEGREE) -> LinearActionBase:
    """Base for forms on a Lie group (phi omitted) or on an action groupoid."""
    return LinearActionBase.from_group_rep(phi if phi is not None else trivial_rep(group, 0), delta,
                                           max_degree=max_degree)
