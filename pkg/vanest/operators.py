"""
Van Est operators on groupoid cochains.

R_u f(a_1..a_{p-1}) = d/deps [ Delta_{b^-1} f(b, a_1, .., a_{p-1}) ],  b = b_eps(t(a_1)),
the first-order arrow of the right-invariant flow of u ending at t(a_1).

VE(f)(u_1..u_p) = sum_sigma sgn(sigma) d^p/deps_1..deps_p Delta_{(g_1..g_p)^-1} f(b_1, .., b_p),
where slot i carries the flow of u_{sigma(i)} and the arrows are built from the
last slot: b_p ends at the base point, b_i ends at the target of b_{i+1}.
"""

import logging
from dataclasses import dataclass

import numpy as np

from groupworld.cochains import Cochain, check_normalized, homogeneity_residual
from liealgebra.chevalley import GradedForm, multinomial
from tensorcore.errors import BudgetError, DimensionError, StructureError
from tensorcore.jets import Jet, coefficient_of, fresh_symbol, part_of
from tensorcore.permutations import permutations_with_sign
from tensorcore.tensors import AltSymTensor, alt_keys, sym_keys
from vanest.constants import HOMOGENEITY_TOL, JET_BUDGET

LOGGER = logging.getLogger(__name__)


@dataclass
class VEContext:
    """Jet budget and sampling policy shared by the Van Est operators."""
    budget: int = JET_BUDGET
    check_normalization: bool = False
    rng: object = None

    def require(self, depth: int):
        if depth > self.budget:
            raise BudgetError(f"derivative depth {depth} exceeds the jet budget {self.budget}")


DEFAULT_CONTEXT = VEContext()


def _twisted(f: Cochain, g, value):
    if f.twist is None:
        return value
    return f.twist(f.groupoid.group.inverse(g)) @ value


def R(section, f: Cochain) -> Cochain:
    """Degree p-1 cochain R_u f; u is whatever the groupoid's curve() accepts."""
    if f.p < 1:
        raise DimensionError("R_u needs a cochain of degree >= 1")
    groupoid = f.groupoid

    def fn(pt):
        eps = Jet.variable(fresh_symbol("r"))
        b = groupoid.curve(section, pt.base, eps)
        value = _twisted(f, groupoid.group_element(b), f(groupoid.point((b,) + pt.arrows)))
        return np.array([part_of(x, eps.symbols[0], 1) for x in value], dtype=object)

    return f.like(f.p - 1, fn, f"R({f.name})")


class FlowMemo:
    """Flowed arrows of slot suffixes at one base object.

    Arrow i depends only on the sections of slots i..p-1, so every permutation
    ending in the same sections reuses those arrows and their group product.
    Symbols are per slot and shared by all keys evaluated through one memo.
    """

    def __init__(self, groupoid, sections, base, p: int):
        self.groupoid = groupoid
        self.sections = sections
        self.base = base
        self.symbols = [fresh_symbol("ve") for _ in range(p)]
        self.suffixes = {(): ((), groupoid.group.identity().astype(object))}

    def suffix(self, key: tuple) -> tuple:
        if key not in self.suffixes:
            rest, product = self.suffix(key[1:])
            slot = len(self.symbols) - len(key)
            source = self.groupoid.target(rest[0]) if rest else self.base
            arrow = self.groupoid.curve(self.sections[key[0]], source, Jet.variable(self.symbols[slot]))
            self.suffixes[key] = ((arrow,) + rest, self.groupoid.group_element(arrow) @ product)
        return self.suffixes[key]

    def point(self, key: tuple):
        arrows, product = self.suffix(key)
        return self.groupoid.point(arrows, self.base), product


def _ve_sum(f: Cochain, memo: FlowMemo, ids: tuple) -> np.ndarray:
    monomial = {s: 1 for s in memo.symbols}
    total = np.zeros(f.value_dim, dtype=object)
    for perm in permutations_with_sign(len(ids)):
        pt, product = memo.point(tuple(ids[i] for i in perm.sigma))
        value = _twisted(f, product, f(pt))
        total = total + perm.sign * np.array([_mixed(x, monomial) for x in value], dtype=object)
    return total


def van_est_value(f: Cochain, sections, base=None, ctx: VEContext = DEFAULT_CONTEXT) -> np.ndarray:
    """VE(f)(u_1..u_p) at a base object; jets in the base are carried through."""
    p = f.p
    if len(sections) != p:
        raise DimensionError(f"{p}-cochain evaluated on {len(sections)} sections")
    ctx.require(p)
    groupoid = f.groupoid
    if base is None:
        base = groupoid.origin()
    if p == 0:
        return f(groupoid.point((), base))
    return _ve_sum(f, FlowMemo(groupoid, list(sections), base, p), tuple(range(p)))


def _mixed(x, monomial: dict):
    """Coefficient of prod eps_i as a jet in any remaining symbols."""
    for var in monomial:
        x = part_of(x, var, 1)
    return x


def _basis_values(f: Cochain, base, ctx: VEContext):
    """(key, VE(f)(e_key)) over canonical keys, all drawn from one FlowMemo."""
    algebra = f.groupoid.group.algebra
    keys = alt_keys(algebra.n, f.p)
    if f.p == 0:
        for key in keys:
            yield key, van_est_value(f, [], base, ctx)
        return
    ctx.require(f.p)
    if base is None:
        base = f.groupoid.origin()
    memo = FlowMemo(f.groupoid, [algebra.basis_vector(i) for i in range(algebra.n)], base, f.p)
    for key in keys:
        yield key, _ve_sum(f, memo, key)
    LOGGER.debug("VE(%s): %d flowed arrows for %d keys", f.name, len(memo.suffixes) - 1, len(keys))


def van_est(f: Cochain, base=None, ctx: VEContext = DEFAULT_CONTEXT) -> AltSymTensor:
    """VE(f) on the canonical basis of the Lie algebra, as an element of Lambda^p g* (x) R^value_dim."""
    if ctx.check_normalization:
        check_normalized(f, ctx.rng if ctx.rng is not None else np.random.default_rng(0))
    algebra = f.groupoid.group.algebra
    out = AltSymTensor(algebra.n, f.p, 0, f.value_dim)
    for key, value in _basis_values(f, base, ctx):
        if any(x != 0 for x in value):
            out.coeffs[(key, ())] = value
    return out


def ve_khom(f: Cochain, k: int, ctx: VEContext = DEFAULT_CONTEXT, rng=None) -> GradedForm:
    """VE of a k-homogeneous cochain on t*C*, read off as Lambda^p g* (x) S^k C.

    The base point is xi = z with z_a order-k jets; the piece T satisfies
    VE(f)(e_J)(xi) = sum_K T_{J,K} multinomial(K) xi^K.
    """
    groupoid = f.groupoid
    dim_c = groupoid.base_dim
    if f.value_dim != 1:
        raise DimensionError("VE_k-hom expects a scalar cochain")
    if rng is not None:
        residual = homogeneity_residual(f, k, rng)
        if residual > HOMOGENEITY_TOL:
            raise StructureError(f"{f.name} is not {k}-homogeneous (residual {residual:.3e})")
    ctx.require(f.p)
    algebra = groupoid.group.algebra
    names = [fresh_symbol("xi") for _ in range(dim_c)]
    base = np.array([Jet.variable(s, order=max(k, 1)) for s in names], dtype=object)
    piece = AltSymTensor(algebra.n, f.p, k, 1, dim_c)
    for key, value in _basis_values(f, base, ctx):
        value = value[0]
        for sym in sym_keys(dim_c, k):
            powers = {}
            for a in sym:
                powers[names[a]] = powers.get(names[a], 0) + 1
            coeff = coefficient_of(value, powers)
            if coeff != 0:
                piece.coeffs[(key, sym)] = np.array([coeff / multinomial(sym)], dtype=object)
    return GradedForm(algebra.n, f.p, dim_c, {k: piece})
