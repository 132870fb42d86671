"""
The Weil complex W^{p,q}(g, C) of a Lie algebra acting linearly on R^n_M.

An element c = (c_0, c_1, ..) has components
    c_k(u_1..u_{p-k} | v_1..v_k) in Omega^{q-k}(R^n_M, C),
alternating in the u's and symmetric in the v's. Components are stored on
constant basis sections only; on f * u the first slot obeys
    c_k(f u_1, ..|V) = f c_k(u_1, ..|V) + df ^ c_{k+1}(u_2, ..|u_1, V)
while the v slots are function-linear.

Differential:
    d_W(c)_k(u_1..u_{p+1-k} | V) = (-1)^k (d_CE(c_k)(u|V) - sum_j i_{rho(v_j)} c_{k-1}(u|V without v_j))
with u acting on Omega(M, S^k g* (x) C) by L_{rho(u)} (x) 1 + 1 (x) u.

Linear vector fields: rho(e_i) = A_i x, and [A x, B x] = (B A - A B) x, so the
anchor condition reads A_j A_i - A_i A_j = sum_k c^k_ij A_k.
"""

import itertools
import logging
from fractions import Fraction
from numbers import Rational

import numpy as np

from liealgebra.algebra import LieAlgebra
from liealgebra.representation import Representation
from tensorcore.errors import DimensionError, StructureError
from tensorcore.exact import fraction_matrix
from tensorcore.permutations import sort_with_sign
from tensorcore.tensors import AltSymTensor, alt_keys, sym_keys
from weil.constants import DEFAULT_POLY_DEGREE, MAX_BASE_DIM, SPENCER_TOL
from weil.polyform import PolyForm, random_form

LOGGER = logging.getLogger(__name__)

ANCHOR_FLOAT_TOL = 1e-9


def _rationalize(m: np.ndarray) -> np.ndarray:
    """Integral float matrices (derivatives of catalog actions) become exact."""
    m = np.asarray(m, dtype=object)
    if all(isinstance(x, Rational) for x in m.flat):
        return fraction_matrix(m)
    if all(abs(float(x) - round(float(x))) < 1e-12 for x in m.flat):
        return fraction_matrix(np.vectorize(lambda x: int(round(float(x))), otypes=[object])(m))
    return m


class LinearActionBase:
    """g acting on M = R^n_M by linear vector fields, and on the coefficients C."""

    def __init__(self, algebra: LieAlgebra, anchor, rep: Representation, name: str = "base",
                 max_degree: int = DEFAULT_POLY_DEGREE, phi=None, delta=None):
        if rep.algebra.n != algebra.n:
            raise DimensionError(f"{name}: representation over an algebra of dimension {rep.algebra.n}")
        mats = [_rationalize(a) for a in anchor]
        if len(mats) != algebra.n:
            raise DimensionError(f"{name}: {len(mats)} anchor matrices for dimension {algebra.n}")
        shapes = {m.shape for m in mats}
        if len(shapes) > 1 or any(len(s) != 2 or s[0] != s[1] for s in shapes):
            raise DimensionError(f"{name}: anchor matrices must be square and of one size")
        self.n_M = mats[0].shape[0] if mats else 0
        if self.n_M > MAX_BASE_DIM:
            raise DimensionError(f"{name}: base dimension {self.n_M} above {MAX_BASE_DIM}")
        self.algebra = algebra
        self.anchor = mats
        self.rep = rep
        self.name = name
        self.max_degree = max_degree
        self.phi = phi
        self.delta = delta

    @classmethod
    def point(cls, algebra: LieAlgebra, rep: Representation, name: str = "point") -> "LinearActionBase":
        empty = np.zeros((0, 0), dtype=object)
        return cls(algebra, [empty] * algebra.n, rep, name)

    @classmethod
    def from_group_rep(cls, phi, delta, name: str | None = None,
                       max_degree: int = DEFAULT_POLY_DEGREE) -> "LinearActionBase":
        """Infinitesimal data of G acting on R^n through phi, on C through delta.

        The action groupoid has arrows g: phi(g)^-1 x -> x, whose anchor is A_i = -d phi(e_i).
        """
        if phi.group is not delta.group:
            raise StructureError("action and coefficients over different groups")
        algebra = phi.group.algebra
        dphi, ddelta = phi.derivative(), delta.derivative()
        rep = Representation(algebra, [_rationalize(m) for m in ddelta.rho], ddelta.name)
        anchor = [-_rationalize(m) for m in dphi.rho]
        return cls(algebra, anchor, rep, name or f"{phi.group.name}x{phi.name}", max_degree, phi, delta)

    @property
    def exact(self) -> bool:
        return self.rep.exact and all(isinstance(x, Rational) for m in self.anchor for x in m.flat)

    def field(self, u) -> np.ndarray:
        out = np.zeros((self.n_M, self.n_M), dtype=object)
        for ui, a in zip(u, self.anchor):
            if ui != 0:
                out = out + ui * a
        return out

    def anchor_residual(self) -> float:
        c = self.algebra.c
        worst = 0.0
        for i, j in itertools.combinations(range(self.algebra.n), 2):
            gap = self.anchor[j] @ self.anchor[i] - self.anchor[i] @ self.anchor[j]
            for k in range(self.algebra.n):
                if c[i, j, k] != 0:
                    gap = gap - c[i, j, k] * self.anchor[k]
            worst = max(worst, max((abs(complex(x)) for x in gap.flat), default=0.0))
        return worst

    def check(self):
        residual = self.anchor_residual()
        if residual > (0 if self.exact else ANCHOR_FLOAT_TOL):
            raise StructureError(f"{self.name}: anchor is not a Lie algebra morphism (residual {residual:.3e})")
        self.rep.check_flat()
        LOGGER.debug("%s: anchor and coefficient representation verified", self.name)

    def act(self, i: int, form: PolyForm) -> PolyForm:
        """e_i on Omega(M, C): L_{rho(e_i)} + N_i."""
        return form.lie(self.anchor[i]) + form.apply(self.rep.rho[i])

    def zero(self, r: int) -> PolyForm:
        return PolyForm(self.n_M, r, self.rep.dim, max_degree=self.max_degree)

    def __repr__(self):
        return f"LinearActionBase({self.name!r}, n_M={self.n_M}, algebra={self.algebra.name}, dim_C={self.rep.dim})"


class WeilElement:
    def __init__(self, base: LinearActionBase, p: int, q: int, components: dict | None = None):
        if p < 0 or q < 0:
            raise DimensionError(f"invalid bidegree ({p}, {q})")
        self.base = base
        self.p = p
        self.q = q
        self.components = {}
        for (ukey, vkey), form in (components or {}).items():
            self._store(tuple(ukey), tuple(vkey), form)

    def _store(self, ukey: tuple, vkey: tuple, form: PolyForm):
        k = len(vkey)
        if len(ukey) + k != self.p or k > self.q:
            raise DimensionError(f"slot counts {len(ukey)}|{k} do not fit W^({self.p},{self.q})")
        if ukey != tuple(sorted(set(ukey))) or vkey != tuple(sorted(vkey)):
            raise DimensionError(f"non-canonical slots {ukey}|{vkey}")
        if (form.n, form.r, form.value_dim) != (self.base.n_M, self.q - k, self.base.rep.dim):
            raise DimensionError(f"component {ukey}|{vkey} is {form!r}, expected a {self.q - k}-form")
        if not form.is_zero():
            self.components[(ukey, vkey)] = form

    @classmethod
    def from_function(cls, base: LinearActionBase, p: int, q: int, fn) -> "WeilElement":
        """Build from fn(ukey, vkey) -> PolyForm on canonical slots."""
        out = cls(base, p, q)
        for ukey, vkey in out.keys():
            out._store(ukey, vkey, fn(ukey, vkey))
        return out

    @classmethod
    def random(cls, base: LinearActionBase, p: int, q: int, rng, degree: int = 2) -> "WeilElement":
        return cls.from_function(base, p, q, lambda u, v: random_form(
            base.n_M, q - len(v), base.rep.dim, degree, rng, base.max_degree))

    def keys(self, k: int | None = None):
        n = self.base.algebra.n
        ks = range(min(self.p, self.q) + 1) if k is None else [k]
        for kk in ks:
            for ukey in alt_keys(n, self.p - kk):
                for vkey in sym_keys(n, kk):
                    yield ukey, vkey

    def get(self, u=(), v=()) -> PolyForm:
        """Component on arbitrary basis slots; u slots resolve by permutation sign."""
        k = len(v)
        if k > self.q or len(u) + k != self.p:
            raise DimensionError(f"slot counts {len(u)}|{k} do not fit W^({self.p},{self.q})")
        ukey, sign = sort_with_sign(u)
        form = None if ukey is None else self.components.get((ukey, tuple(sorted(v))))
        if form is None:
            return self.base.zero(self.q - k)
        return form if sign == 1 else -form

    def component(self, k: int) -> dict:
        return {key: self.get(*key) for key in self.keys(k)}

    def like(self) -> "WeilElement":
        return WeilElement(self.base, self.p, self.q)

    def _check_same_space(self, other: "WeilElement"):
        if self.base is not other.base or (self.p, self.q) != (other.p, other.q):
            raise DimensionError("Weil elements live in different spaces")

    def __add__(self, other: "WeilElement") -> "WeilElement":
        self._check_same_space(other)
        out = self.like()
        for key in set(self.components) | set(other.components):
            out._store(*key, self.get(*key) + other.get(*key))
        return out

    def __neg__(self) -> "WeilElement":
        out = self.like()
        out.components = {key: -f for key, f in self.components.items()}
        return out

    def __sub__(self, other: "WeilElement") -> "WeilElement":
        return self + (-other)

    def __mul__(self, scalar) -> "WeilElement":
        out = self.like()
        for key, form in self.components.items():
            out._store(*key, form * scalar)
        return out

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.components

    def max_abs(self) -> float:
        return max((f.max_abs() for f in self.components.values()), default=0.0)

    def distance(self, other: "WeilElement") -> float:
        return (self - other).max_abs()

    def __repr__(self):
        return f"WeilElement(p={self.p}, q={self.q}, base={self.base.name!r}, nonzero={len(self.components)})"


def _act(base: LinearActionBase, i: int, lookup, vkey: tuple) -> PolyForm:
    """(e_i . P)(V) = L_{rho(e_i)} P(V) + N_i P(V) - sum_l P(.., [e_i, v_l], ..)."""
    c = base.algebra.c
    out = base.act(i, lookup(vkey))
    for l, vl in enumerate(vkey):
        for m in range(base.algebra.n):
            if c[i, vl, m] != 0:
                out = out - lookup(vkey[:l] + (m,) + vkey[l + 1:]) * c[i, vl, m]
    return out


def module_action(base: LinearActionBase, i: int, family: dict) -> dict:
    """e_i acting on Omega^r(M, S^k g* (x) C), stored as {sorted vkey: form}."""
    if not family:
        return {}
    k = {len(v) for v in family}
    if len(k) != 1:
        raise DimensionError("mixed symmetric degrees in one family")
    k = k.pop()
    sample = next(iter(family.values()))
    zero = base.zero(sample.r)

    def lookup(v):
        return family.get(tuple(sorted(v)), zero)

    return {vkey: _act(base, i, lookup, vkey) for vkey in sym_keys(base.algebra.n, k)}


def _ce_term(c: WeilElement, ukey: tuple, vkey: tuple) -> PolyForm:
    """d_CE(c_k)(u_0..u_m | V) for the module of S^k g* (x) C valued forms."""
    base, cst = c.base, c.base.algebra.c
    m = len(ukey)
    out = base.zero(c.q - len(vkey))
    for i, ui in enumerate(ukey):
        rest = ukey[:i] + ukey[i + 1:]
        term = _act(base, ui, lambda v, rest=rest: c.get(rest, v), vkey)
        out = out + term * (-1) ** i
    for i in range(m):
        for j in range(i + 1, m):
            rest = tuple(ukey[l] for l in range(m) if l != i and l != j)
            for l in range(base.algebra.n):
                coeff = cst[ukey[i], ukey[j], l]
                if coeff != 0:
                    out = out + c.get((l,) + rest, vkey) * ((-1) ** (i + j) * coeff)
    return out


def weil_differential(c: WeilElement) -> WeilElement:
    base = c.base
    out = WeilElement(base, c.p + 1, c.q)
    for ukey, vkey in out.keys():
        k = len(vkey)
        form = _ce_term(c, ukey, vkey) if k <= c.p else base.zero(c.q - k)
        for j in range(k):
            form = form - c.get(ukey, vkey[:j] + vkey[j + 1:]).interior(base.anchor[vkey[j]])
        out._store(ukey, vkey, form * (-1) ** k)
    LOGGER.debug("d_W on W^(%d,%d) over %s: %d nonzero components", c.p, c.q, base.name, len(out.components))
    return out


def weil_wedge(c: WeilElement, beta: AltSymTensor) -> WeilElement:
    """(c ^ beta)_k(u_1..u_{p+p'-k}|V) = sum over unshuffles of sgn c_k(u_first|V) beta(u_rest)."""
    n = c.base.algebra.n
    if beta.n != n or beta.k != 0 or beta.value_dim != 1:
        raise DimensionError("beta must be a scalar alternating form on the same algebra")
    out = WeilElement(c.base, c.p + beta.p, c.q)
    for ukey, vkey in out.keys():
        k = len(vkey)
        if k > c.p:
            continue
        form = c.base.zero(c.q - k)
        positions = range(len(ukey))
        for first in itertools.combinations(positions, c.p - k):
            rest = tuple(i for i in positions if i not in first)
            b = beta.get(tuple(ukey[i] for i in rest))[0]
            if b == 0:
                continue
            _, sign = sort_with_sign(first + rest)
            form = form + c.get(tuple(ukey[i] for i in first), vkey) * (sign * b)
        out._store(ukey, vkey, form)
    return out


def spencer_check(c0: dict, c1: dict, base: LinearActionBase, tol: float = SPENCER_TOL) -> dict:
    """Components of d_W(c) for c = (c_0, c_1) in W^{1,q}.

    c0 maps a basis index of g to a q-form, c1 maps one to a (q-1)-form. The
    element is a C-valued Spencer operator when all three components vanish.
    """
    forms = list(c0.values()) + list(c1.values())
    if not forms:
        raise DimensionError("empty Spencer data")
    q = forms[0].r if c0 else forms[0].r + 1
    comps = {((i,), ()): f for i, f in c0.items()}
    if q == 0 and c1:
        raise DimensionError("W^{1,0} has no c_1 component")
    comps.update({((), (j,)): f for j, f in c1.items()})
    image = weil_differential(WeilElement(base, 1, q, comps))
    residuals = {k: max((f.max_abs() for f in image.component(k).values()), default=0.0)
                 for k in range(min(2, q) + 1)}
    report = {"image": image, "residuals": residuals, "spencer": all(r <= tol for r in residuals.values())}
    LOGGER.debug("Spencer check on W^(1,%d): residuals %s", q, residuals)
    return report


def as_section(base: LinearActionBase, entries) -> list:
    """A section M -> g as n scalar functions; numbers are constants, PolyForms polynomial maps."""
    entries = list(entries)
    if len(entries) != base.algebra.n:
        raise DimensionError(f"section with {len(entries)} entries for dimension {base.algebra.n}")
    out = []
    for e in entries:
        if isinstance(e, PolyForm):
            if e.r != 0 or e.value_dim != 1 or e.n != base.n_M:
                raise DimensionError(f"section entry {e!r} is not a function on R^{base.n_M}")
            out.append(e)
        else:
            out.append(PolyForm.constant(base.n_M, [e], max_degree=base.max_degree))
    return out


def _eval_frames(c: WeilElement, us: list, vs: tuple) -> PolyForm:
    for i, s in enumerate(us):
        if isinstance(s, int):
            continue
        k = len(vs)
        total = c.base.zero(c.q - k)
        others = us[:i] + us[i + 1:]
        for a, f in enumerate(s):
            if f.is_zero():
                continue
            total = total + f.wedge(_eval_frames(c, us[:i] + [a] + us[i + 1:], vs))
            if k + 1 <= c.q:
                total = total + f.d().wedge(_eval_frames(c, others, vs + (a,))) * (-1) ** i
        return total
    return c.get(tuple(us), vs)


def evaluate_on_sections(c: WeilElement, us, vs) -> PolyForm:
    """c_k(u_1..u_{p-k}|v_1..v_k) on sections, through the Leibniz anomaly in the u slots."""
    k = len(vs)
    if k > min(c.p, c.q) or len(us) + k != c.p:
        raise DimensionError(f"{len(us)}|{k} sections for W^({c.p},{c.q})")
    us = [as_section(c.base, u) for u in us]
    vs = [as_section(c.base, v) for v in vs]
    total = c.base.zero(c.q - k)
    for idx in itertools.product(range(c.base.algebra.n), repeat=k):
        coeff = PolyForm.constant(c.base.n_M, [1], max_degree=c.base.max_degree)
        for v, a in zip(vs, idx):
            coeff = coeff.wedge(v[a])
        if coeff.is_zero():
            continue
        total = total + coeff.wedge(_eval_frames(c, list(us), tuple(idx)))
    return total


def to_ce_tensor(c: WeilElement) -> AltSymTensor:
    """Over a point only c_q survives: an element of Lambda^{p-q} g* (x) S^q g* (x) C.

    The value index is symkey_index * dim_C + coordinate, the layout of
    tensor(symmetric_power(coadjoint, q), C).
    """
    if c.base.n_M != 0:
        raise DimensionError("CE reduction needs a point base")
    if c.p < c.q:
        raise DimensionError(f"W^({c.p},{c.q}) over a point is zero")
    n, dim = c.base.algebra.n, c.base.rep.dim
    skeys = sym_keys(n, c.q)

    def value(alt, _):
        out = []
        for vkey in skeys:
            form = c.get(alt, vkey)
            const = form.terms.get(((), ()))
            out.extend(const if const is not None else [Fraction(0)] * dim)
        return out

    return AltSymTensor.from_function(n, c.p - c.q, 0, len(skeys) * dim, value)


def from_ce_tensor(base: LinearActionBase, t: AltSymTensor, q: int) -> WeilElement:
    if base.n_M != 0:
        raise DimensionError("CE lift needs a point base")
    n, dim = base.algebra.n, base.rep.dim
    skeys = sym_keys(n, q)
    if t.value_dim != len(skeys) * dim or t.n != n or t.k != 0:
        raise DimensionError(f"{t!r} is not in Lambda g* (x) S^{q} g* (x) C")
    out = WeilElement(base, t.p + q, q)
    for (alt, _), value in t.coeffs.items():
        for s, vkey in enumerate(skeys):
            chunk = value[s * dim:(s + 1) * dim]
            out._store(alt, vkey, PolyForm.constant(0, chunk, dim, base.max_degree))
    return out
