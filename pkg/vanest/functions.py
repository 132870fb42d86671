"""
Forms on a Lie group as functions on the tangent groupoid, and the projections
that cut out their image.

On B_p of TG x_G .. x_G TG x_G t*C* (q tangent copies) a function has q + 1
linear entries: the tangent copies 1..q and the covector xi (entry q + 1).
  F_w(pt) = <xi, w(g_1..g_p)(V^1, .., V^q)>,  V^j = (X^j_1, .., X^j_p)
  P_{k-hom}: degree-k part under the total scaling of every entry
  P_spl:     inclusion-exclusion so that zeroing any entry kills the function
  P_sk:      (1/q!) sum_sigma sgn(sigma) f o sigma over the tangent copies
  P_ext = P_sk o P_spl o P_{q+1-hom}
"""

import itertools
import logging
import math

import numpy as np

from groupworld.cochains import Cochain
from groupworld.groupoids import NervePoint
from groupworld.tangent import TangentArrow, TangentGroup, tangent_group
from tensorcore.errors import DimensionError
from tensorcore.jets import Jet, coefficient_of, fresh_symbol
from tensorcore.permutations import permutations_with_sign
from vanest.forms import FormCochain, NerveTangent

LOGGER = logging.getLogger(__name__)


def forms_to_functions(w: FormCochain) -> Cochain:
    """F_w on the tangent groupoid of the Lie group w lives on (point base only)."""
    if w.base.n_M != 0:
        raise DimensionError("forms become functions on the tangent groupoid only over a point")
    tg = tangent_group(w.base.delta, w.q)
    empty = np.zeros(0, dtype=object)

    def fn(pt):
        gs = tuple(a.g for a in pt.arrows)
        tangents = [NerveTangent(tg.tangents(pt, j), empty) for j in range(1, w.q + 1)]
        return np.asarray(pt.base, dtype=object) @ w(gs, empty, tangents)

    return Cochain(tg, w.p, fn, 1, None, f"F({w.name})")


def _map_point(pt: NervePoint, xs_map, xi_map) -> NervePoint:
    arrows = tuple(TangentArrow(a.g, xs_map(a.xs), xi_map(a.xi)) for a in pt.arrows)
    return NervePoint(arrows, xi_map(pt.base))


def _tangent_groupoid(f: Cochain) -> TangentGroup:
    if not isinstance(f.groupoid, TangentGroup):
        raise DimensionError(f"{f.name} does not live on a tangent groupoid")
    return f.groupoid


def zero_entries(f: Cochain, entries) -> Cochain:
    """0_I^* f: the entries in I (1..q tangent copies, q + 1 the covector) set to zero."""
    q = _tangent_groupoid(f).q
    entries = frozenset(entries)
    if not entries <= set(range(1, q + 2)):
        raise DimensionError(f"entries {sorted(entries)} outside 1..{q + 1}")

    def xs_map(xs):
        return tuple(0 * x if j + 1 in entries else x for j, x in enumerate(xs))

    def xi_map(xi):
        return 0 * np.asarray(xi, dtype=object) if q + 1 in entries else xi

    return f.like(f.p, lambda pt: f(_map_point(pt, xs_map, xi_map)), f"0{sorted(entries)}*{f.name}")


def permute_copies(f: Cochain, sigma) -> Cochain:
    """f o sigma: copy j of the result reads copy sigma[j] of the point."""
    q = _tangent_groupoid(f).q
    sigma = tuple(sigma)
    if sorted(sigma) != list(range(q)):
        raise DimensionError(f"{sigma} is not a permutation of the {q} tangent copies")
    return f.like(f.p, lambda pt: f(_map_point(pt, lambda xs: tuple(xs[s] for s in sigma), lambda xi: xi)),
                  f"{f.name}o{sigma}")


def scale_entries(f: Cochain, lam) -> Cochain:
    """Pullback along the total scaling of every tangent copy and the covector."""
    return f.like(f.p, lambda pt: f(_map_point(pt, lambda xs: tuple(lam * x for x in xs),
                                               lambda xi: lam * np.asarray(xi, dtype=object))),
                  f"h({f.name})")


def P_hom(f: Cochain, k: int) -> Cochain:
    """Degree-k part under the total scaling, read off a lambda jet of order k."""
    if k < 0:
        raise DimensionError(f"negative homogeneity degree {k}")
    _tangent_groupoid(f)

    def fn(pt):
        lam = Jet.variable(fresh_symbol("lam"), order=max(k, 1))
        value = scale_entries(f, lam)(pt)
        return np.array([coefficient_of(v, {lam.symbols[0]: k}) for v in value], dtype=object)

    return f.like(f.p, fn, f"P{k}hom({f.name})")


def P_spl(f: Cochain) -> Cochain:
    """P_(-1) = f, P_(l) = P_(l-1) - sum_{|I| = q+1-l} 0_I^* P_(l-1) for l = 0..q."""
    q = _tangent_groupoid(f).q
    out = f
    for l in range(q + 1):
        subsets = list(itertools.combinations(range(1, q + 2), q + 1 - l))
        step = out
        for subset in subsets:
            step = step - zero_entries(out, subset)
        out = step
    return out.like(f.p, out.fn, f"Pspl({f.name})")


def P_sk(f: Cochain) -> Cochain:
    q = _tangent_groupoid(f).q
    terms = [(perm.sign, permute_copies(f, perm.sigma)) for perm in permutations_with_sign(q)]
    scale = 1 / math.factorial(q)

    def fn(pt):
        total = np.zeros(f.value_dim, dtype=object)
        for sign, term in terms:
            total = total + sign * term(pt)
        return scale * total

    return f.like(f.p, fn, f"Psk({f.name})")


def P_ext(f: Cochain) -> Cochain:
    q = _tangent_groupoid(f).q
    return P_sk(P_spl(P_hom(f, q + 1)))


def function_gap(a: Cochain, b: Cochain, rng, samples: int = 4) -> float:
    """max |a - b| over sampled points of their common tangent groupoid."""
    tg = _tangent_groupoid(a)
    worst = 0.0
    for _ in range(samples):
        pt = tg.random_point(rng, a.p)
        gap = np.asarray(a(pt) - b(pt), dtype=complex)
        worst = max(worst, float(np.max(np.abs(gap), initial=0.0)))
    LOGGER.debug("sampled gap %s vs %s: %.3e", a.name, b.name, worst)
    return worst
