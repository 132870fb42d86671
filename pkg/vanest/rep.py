"""
Van Est map for 2-term representations up to homotopy.

VE_rep(mu) = (VE(mu_E), VE(mu_C)) componentwise, and the same map obtained
through the VB-groupoid: ev(VE_1-hom(Psi(mu))).
"""

import logging

import numpy as np

from groupworld.cochains import Cochain
from groupworld.groupoids import lie_group
from groupworld.vb import chi, upsilon
from ruth.algebra_side import GradedCochain, OmegaElement, ruth_ev
from ruth.group_side import RuthCochain, psi
from tensorcore.jets import Jet, coefficient_of, fresh_symbol
from tensorcore.tensors import AltSymTensor, alt_keys
from vanest.operators import DEFAULT_CONTEXT, VEContext, van_est, van_est_value

LOGGER = logging.getLogger(__name__)


def _component(mu: RuthCochain, which: str) -> Cochain:
    ruth = mu.ruth
    lg = lie_group(ruth.group)
    if which == "E":
        return Cochain(lg, mu.p, lambda pt: mu.mu_e(a.g for a in pt.arrows), ruth.dim_e,
                       ruth.delta_e_rep(), f"{mu.name}_E")
    return Cochain(lg, mu.p + 1, lambda pt: mu.mu_c(a.g for a in pt.arrows), ruth.dim_c,
                   ruth.delta_c_rep(), f"{mu.name}_C")


def ve_rep(mu: RuthCochain, ctx: VEContext = DEFAULT_CONTEXT) -> OmegaElement:
    omega_e = None if mu.p == -1 else van_est(_component(mu, "E"), ctx=ctx)
    return OmegaElement(mu.p, omega_e, van_est(_component(mu, "C"), ctx=ctx))


def ve_rep_via_psi(mu: RuthCochain, ctx: VEContext = DEFAULT_CONTEXT) -> OmegaElement:
    """ev o VE_1-hom o Psi, with VE evaluated on chi_u and Upsilon_eta sections of V at xi = jets."""
    ruth = mu.ruth
    phi = psi(mu)
    algebra = ruth.group.algebra
    n, deg = algebra.n, phi.p
    names = [fresh_symbol("xi") for _ in range(ruth.dim_c)]
    base = np.array([Jet.variable(name) for name in names], dtype=object)

    linear = AltSymTensor(n, deg, 0, ruth.dim_c)
    for key in alt_keys(n, deg):
        value = van_est_value(phi, [chi(algebra.basis_vector(i)) for i in key], base, ctx)[0]
        coeffs = np.array([coefficient_of(value, {name: 1}) for name in names], dtype=object)
        if any(x != 0 for x in coeffs):
            linear.coeffs[(key, ())] = coeffs
    core = None
    if deg > 0:
        core = AltSymTensor(n, deg - 1, 0, ruth.dim_e)
        sign = (-1) ** (deg - 1)
        for key in alt_keys(n, deg - 1):
            values = []
            for b in range(ruth.dim_e):
                eta = np.zeros(ruth.dim_e, dtype=object)
                eta[b] = 1
                sections = [upsilon(eta)] + [chi(algebra.basis_vector(i)) for i in key]
                values.append(coefficient_of(van_est_value(phi, sections, base, ctx)[0], {}))
            values = np.array(values, dtype=object)
            if any(x != 0 for x in values):
                core.coeffs[(key, ())] = sign * values
    LOGGER.debug("VE_rep through Psi of %s in degree %d", mu.name, mu.p)
    return ruth_ev(GradedCochain(deg, linear, core))


def ve_rep_agreement(mu: RuthCochain, ctx: VEContext = DEFAULT_CONTEXT) -> float:
    """max |VE_rep(mu) - ev(VE_1-hom(Psi(mu)))|."""
    return ve_rep(mu, ctx).distance(ve_rep_via_psi(mu, ctx))

