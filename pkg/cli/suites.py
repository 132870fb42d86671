"""
Verification suites. Each suite takes a JobConfig and returns a list of CheckResult;
library errors inside a check become error results, never exceptions.
"""

import itertools
import logging
import time

import numpy as np

from cli.config import JobConfig
from cli.report import CheckResult
from groupworld.cochains import cup, hom_project_group, normalization_residual, sampled_max, simplicial_delta
from groupworld.groups import trivial_rep
from groupworld.haar import haar, invariance_residual
from groupworld.kappa import gauge_splitting, kappa
from groupworld.tangent import tangent_group
from liealgebra.chevalley import ce_differential, ce_matrix, cohomology_dims
from liealgebra.representation import symmetric_power, trivial
from ruth.algebra_side import random_element, ruth_differential_alg, ruth_differential_graded
from ruth.group_side import RuthCochain, differentiate, psi, ruth_differential_grp
from tensorcore.errors import VanEstError
from tensorcore.tensors import alt_keys, wedge
from vanest.constants import JET_BUDGET
from vanest.crosscheck import forms_functions_crosscheck
from vanest.forms import FormCochain, VE_Omega, delta_form, forms_base
from vanest.homological import cohomology_verdicts, homological_lemma_check, random_lemma_instance
from vanest.operators import van_est, ve_khom
from vanest.rep import ve_rep, ve_rep_agreement
from weil.complex import LinearActionBase, WeilElement, weil_differential

LOGGER = logging.getLogger(__name__)


def _timed(suite: str, name: str, tolerance: float, fn) -> CheckResult:
    """Run fn() -> (residual, details) and time it."""
    start = time.perf_counter()
    try:
        residual, details = fn()
    except VanEstError as e:
        LOGGER.warning("%s/%s: %s", suite, name, e)
        return CheckResult.error(suite, name, f"{type(e).__name__}: {e}", time.perf_counter() - start)
    result = CheckResult.measured(suite, name, residual, tolerance, time.perf_counter() - start, **details)
    LOGGER.debug("%s/%s: residual %.3e (tol %.1e) %s", suite, name, result.residual, tolerance, result.status)
    return result


def _max_abs(values) -> float:
    return max((abs(complex(x)) for x in np.asarray(values, dtype=object).flat), default=0.0)


def ce_suite(cfg: JobConfig) -> list:
    algebra = cfg.group_obj.algebra
    rep = cfg.algebra_rep
    out = []
    for k in range(cfg.max_sym + 1):
        coeff = symmetric_power(rep, k)
        tol = cfg.tol("exact") if coeff.exact else cfg.tol("projection")

        def square(coeff=coeff):
            worst = 0.0
            for p in range(algebra.n - 1):
                worst = max(worst, _max_abs(ce_matrix(algebra, coeff, p + 1) @ ce_matrix(algebra, coeff, p)))
            return worst, {"coefficients": coeff.name}

        def betti(k=k, coeff=coeff):
            numbers = cohomology_dims(algebra, rep, k)
            dims = [len(alt_keys(algebra.n, p)) * coeff.dim for p in range(algebra.n + 1)]
            euler = sum((-1) ** p * (b - d) for p, (b, d) in enumerate(zip(numbers, dims)))
            return abs(euler), {"betti": numbers, "coefficients": coeff.name}

        out.append(_timed("ce", f"d2:S^{k}", tol, square))
        if coeff.exact:
            out.append(_timed("ce", f"betti:S^{k}", cfg.tol("exact"), betti))
    return out


def _form_family(base: LinearActionBase, rng) -> list:
    """(1,0), (1,1), (2,1), (1,2) and (2,2) forms from random integer pairings."""
    size = base.phi.group.size
    M1, M2 = (rng.integers(-2, 3, size=(size, size)).astype(float) for _ in range(2))
    dim = base.rep.dim
    identity = np.eye(size)

    def pair(m, x):
        return np.sum(m * x)

    def values(v):
        return [(c + 1) * v for c in range(dim)]

    def w10(gs, x, ts):
        return values(pair(M1, gs[0] - identity))

    def w11(gs, x, ts):
        return values(pair(M1, ts[0].xs[0] @ gs[0]))

    def w21(gs, x, ts):
        x1, x2 = ts[0].xs
        return values(pair(M1, x1) * pair(M2, gs[1] - identity) + pair(M2, gs[0] - identity) * pair(M2, x2))

    def w12(gs, x, ts):
        a, b = ts
        return values(pair(M1, a.xs[0]) * pair(M2, b.xs[0]) - pair(M1, b.xs[0]) * pair(M2, a.xs[0]))

    def w22(gs, x, ts):
        a, b = ts
        return values(pair(M1, a.xs[0]) * pair(M2, b.xs[1]) - pair(M1, b.xs[0]) * pair(M2, a.xs[1]))

    return [FormCochain(base, p, q, fn, f"w{p}{q}")
            for p, q, fn in ((1, 0, w10), (1, 1, w11), (2, 1, w21), (1, 2, w12), (2, 2, w22))]


def _point_form_base(cfg: JobConfig):
    return forms_base(cfg.group_obj, cfg.group_rep)


def weil_suite(cfg: JobConfig) -> list:
    rng = cfg.rng("weil")
    algebra = cfg.group_obj.algebra
    bases = [LinearActionBase.point(algebra, cfg.algebra_rep)]
    if cfg.groupoid == "action":
        bases.append(forms_base(cfg.group_obj, trivial_rep(cfg.group_obj, 1), cfg.group_rep))
    out = []
    for base in bases:
        tol = cfg.tol("exact") if base.exact else cfg.tol("projection")

        def square(base=base):
            worst = 0.0
            for p, q in itertools.product(range(3), range(3)):
                c = WeilElement.random(base, p, q, rng)
                worst = max(worst, weil_differential(weil_differential(c)).max_abs())
            return worst, {"base": base.name, "n_M": base.n_M}

        out.append(_timed("weil", f"d2:{base.name}", tol, square))

    if cfg.representation["kind"] == "matrices":
        return out
    point = _point_form_base(cfg)
    for w in _form_family(point, rng):
        if w.p != 1:
            continue

        def chain(w=w):
            gap = VE_Omega(delta_form(w)).distance(weil_differential(VE_Omega(w)))
            return gap, {"bidegree": [w.p, w.q]}

        out.append(_timed("weil", f"ve-omega-chain:{w.name}", cfg.tol("forms"), chain))
    return out


def _ruth_mu(ruth, p: int) -> RuthCochain:
    """Normalized cochain of degree 0 or 1 built from matrix entries that vanish at the identity."""
    dim_e, dim_c = ruth.dim_e, ruth.dim_c
    if p == 0:
        return RuthCochain(ruth, 0, lambda gs: [0.3 * (i + 1) for i in range(dim_e)],
                           lambda gs: [(i + 1) * gs[0][1, 0] + (gs[0][0, 0] - 1) for i in range(dim_c)], "mu0")
    return RuthCochain(ruth, 1, lambda gs: [(i + 1) * gs[0][1, 0] for i in range(dim_e)],
                       lambda gs: [gs[0][1, 0] * (gs[1][0, 0] - 1) * (i + 1) for i in range(dim_c)], "mu1")


def _ruth_sampled_max(mu: RuthCochain, rng, samples: int) -> float:
    group = mu.ruth.group
    worst = 0.0
    for _ in range(samples):
        gs = [group.random(rng) for _ in range(mu.p + 1)]
        worst = max(worst, _max_abs(mu.mu_c(gs)))
        if mu.p >= 0:
            worst = max(worst, _max_abs(mu.mu_e(gs[:-1])))
    return worst


def ruth_suite(cfg: JobConfig) -> list:
    ruth = cfg.ruth_obj
    rng = cfg.rng("ruth")
    out = [_timed("ruth", f"axioms:{ruth.name}", cfg.tol("ruth"),
                  lambda: (max(ruth.check(rng, cfg.samples).values()), {}))]
    s = differentiate(ruth)
    out.append(_timed("ruth", "derived-data", cfg.tol("ruth"), lambda: (s.check(), {"exact": s.exact})))

    def algebra_square():
        worst = 0.0
        for p in range(s.algebra.n + 1):
            omega = random_element(s, p, rng)
            worst = max(worst, ruth_differential_alg(ruth_differential_alg(omega, s), s).max_abs())
        return worst, {}

    def graded_model():
        worst = 0.0
        for p in range(2):
            omega = random_element(s, p, rng)
            worst = max(worst, ruth_differential_graded(omega, s).distance(ruth_differential_alg(omega, s)))
        return worst, {}

    exact_tol = cfg.tol("exact") if s.exact else cfg.tol("ruth")
    out.append(_timed("ruth", "D_g^2", exact_tol, algebra_square))
    out.append(_timed("ruth", "graded-model", exact_tol, graded_model))

    degrees = (0, 1) if ruth.group.dim == 1 else (0,)
    for p in degrees:
        mu = _ruth_mu(ruth, p)
        out.append(_timed("ruth", f"D_G^2:{mu.name}", cfg.tol("ruth"), lambda mu=mu: (
            _ruth_sampled_max(ruth_differential_grp(ruth_differential_grp(mu)), rng, cfg.samples), {})))
        out.append(_timed("ruth", f"ve-rep-two-paths:{mu.name}", cfg.tol("ruth"),
                          lambda mu=mu: (ve_rep_agreement(mu), {})))
        out.append(_timed("ruth", f"ve-rep-chain:{mu.name}", cfg.tol("ruth"), lambda mu=mu: (
            ve_rep(ruth_differential_grp(mu)).distance(ruth_differential_alg(ve_rep(mu), s)), {})))
    return out


def group_suite(cfg: JobConfig) -> list:
    group = cfg.group_obj
    rng = cfg.rng("group")
    out = [_timed("group", f"invariants:{group.name}", cfg.tol("projection"),
                  lambda: (max(group.invariant_residuals(rng, cfg.samples).values()), {}))]
    if cfg.representation["kind"] != "matrices":
        rep = cfg.group_rep
        out.append(_timed("group", f"homomorphism:{rep.name}", cfg.tol("projection"),
                          lambda: (rep.homomorphism_residual(rng, cfg.samples), {})))
        out.append(_timed("group", "tangent-associativity", cfg.tol("projection"),
                          lambda: (tangent_group(rep, 1).associativity_residual(rng, cfg.samples), {})))
    if group.compact:
        def haar_invariance():
            rule = haar(group, cfg.resolution)
            worst = max(invariance_residual(rule, lambda g: [g[0, 0] ** 2, g[0, 1] * g[1, 0]], group.random(rng))
                        for _ in range(min(cfg.samples, 4)))
            return worst, {"nodes": len(rule), "scheme": rule.scheme}

        out.append(_timed("group", "haar-invariance", cfg.tol("projection"), haar_invariance))

    groupoid = cfg.groupoid_obj
    for spec in cfg.cochains:
        f = cfg.cochain(spec)
        out.append(_timed("group", f"normalized:{spec.name}", cfg.tol("normalization"),
                          lambda f=f: (normalization_residual(f, rng, cfg.samples), {})))
        if cfg.groupoid == "group":
            continue
        for k in range(3):
            def commutes(f=f, k=k):
                gap = simplicial_delta(hom_project_group(f, k)) - hom_project_group(simplicial_delta(f), k)
                return sampled_max(gap, groupoid, f.p + 1, rng, cfg.samples), {"k": k}

            out.append(_timed("group", f"projection:{spec.name}:k{k}", cfg.tol("projection"), commutes))
    return out


def vanest_suite(cfg: JobConfig) -> list:
    algebra = cfg.group_obj.algebra
    out = []
    cochains = [(spec, cfg.cochain(spec)) for spec in cfg.cochains]
    if cfg.groupoid == "group":
        rep = trivial(algebra, 1)
        for spec, f in cochains:
            if f.p + 1 > JET_BUDGET:
                continue
            out.append(_timed("vanest", f"chain:{spec.name}", cfg.tol("chain"), lambda f=f: (
                van_est(simplicial_delta(f)).distance(ce_differential(van_est(f), rep)), {"p": f.p})))
        degree_one = [(spec, f) for spec, f in cochains if f.p == 1]
        for (sa, a), (sb, b) in itertools.combinations(degree_one, 2):
            out.append(_timed("vanest", f"cup:{sa.name}*{sb.name}", cfg.tol("chain"), lambda a=a, b=b: (
                van_est(cup(a, b)).distance(wedge(van_est(a), van_est(b))), {})))
        return out
    for spec, f in cochains:
        for k in range(3):
            def homogeneous(f=f, k=k):
                projected = ve_khom(hom_project_group(f, k), k).piece(k)
                return projected.distance(ve_khom(f, k).piece(k)), {"k": k}

            out.append(_timed("vanest", f"homogeneous:{spec.name}:k{k}", cfg.tol("homogeneous"), homogeneous))
    return out


def crosscheck_suite(cfg: JobConfig) -> list:
    rng = cfg.rng("crosscheck")
    out = []
    for w in _form_family(_point_form_base(cfg), rng):
        if w.q == 0:
            continue

        def run(w=w):
            report = forms_functions_crosscheck(w, rng=rng, tol=cfg.tol("crosscheck"))
            return max(report["residual"], report["lift_residual"]), {
                "bidegree": report["bidegree"], "components": report["components"]}

        out.append(_timed("crosscheck", f"forms-vs-functions:{w.name}", cfg.tol("crosscheck"), run))
    return out


def kappa_suite(cfg: JobConfig) -> list:
    ruth = cfg.ruth_obj
    rng = cfg.rng("kappa")
    out = []
    for p in (2, 3):
        phi = simplicial_delta(psi(_ruth_mu(ruth, p - 2)))

        def identity(phi=phi, p=p):
            rule = haar(ruth.group, cfg.resolution)
            gap = simplicial_delta(kappa(phi, rule)) - phi * (-1) ** p
            return sampled_max(gap, ruth.groupoid, p, rng, cfg.samples), {"nodes": len(rule)}

        out.append(_timed("kappa", f"homotopy-identity:p{p}", cfg.tol("kappa"), identity))

    def splitting():
        phi = simplicial_delta(psi(_ruth_mu(ruth, 0)))
        rule = haar(ruth.group, cfg.resolution)
        ones = np.ones((ruth.dim_e, ruth.dim_c))
        tilted = gauge_splitting(ruth.groupoid, lambda h: h[1, 0] * ones)
        gap = kappa(phi, rule) - kappa(phi, rule, tilted)
        return sampled_max(gap, ruth.groupoid, 1, rng, cfg.samples), {}

    out.append(_timed("kappa", "splitting-independence", cfg.tol("kappa"), splitting))
    return out


def homological_suite(cfg: JobConfig) -> list:
    rng = cfg.rng("homological")

    def randomized():
        mismatches = 0
        for _ in range(cfg.lemma_cases):
            case = random_lemma_instance(rng)
            report = homological_lemma_check(case["d1"], case["d2"], case["P1"], case["P2"], case["F"])
            oracle = cohomology_verdicts(*case["oracle"])
            mismatches += sum(1 for a, b, ok in zip(report["restricted"], oracle, report["holds"])
                              if a != b or not ok)
        return mismatches, {"cases": cfg.lemma_cases}

    return [_timed("homological", "randomized-complexes", cfg.tol("exact"), randomized)]


SUITE_FUNCTIONS = {
    "ce": ce_suite,
    "weil": weil_suite,
    "ruth": ruth_suite,
    "group": group_suite,
    "vanest": vanest_suite,
    "crosscheck": crosscheck_suite,
    "kappa": kappa_suite,
    "homological": homological_suite,
}
