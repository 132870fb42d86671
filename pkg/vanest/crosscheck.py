"""
Forms route against functions route on a Lie group.

For a (p, q)-form w on G with values in C, the top component of VE_Omega(w)
is compared with VE of F_w on the tangent groupoid with q copies:
  c_q(w)(u | v)_c = VE(F_w)(Z_1 v_1, .., Z_q v_q, T u_1, .., T u_{p-q}) at xi = e_c.
"""

import logging

import numpy as np

from groupworld.tangent import lift_residual, tangent_lift, vertical_lift
from tensorcore.errors import DimensionError
from tensorcore.tensors import alt_keys, sym_keys
from vanest.constants import CROSSCHECK_TOL
from vanest.forms import FormCochain, ve_omega_component
from vanest.functions import forms_to_functions
from vanest.operators import DEFAULT_CONTEXT, VEContext, van_est_value

LOGGER = logging.getLogger(__name__)


def _function_side(f, algebra, ukey, vkey, c, ctx):
    sections = [vertical_lift(j + 1, algebra.basis_vector(v)) for j, v in enumerate(vkey)]
    sections += [tangent_lift(algebra.basis_vector(u)) for u in ukey]
    xi = np.zeros(f.groupoid.dim_c, dtype=object)
    xi[c] = 1
    return van_est_value(f, sections, xi, ctx)[0]


def forms_functions_crosscheck(w: FormCochain, ctx: VEContext = DEFAULT_CONTEXT, rng=None,
                               tol: float = CROSSCHECK_TOL) -> dict:
    """Component-wise gap between the two routes, plus the tangent-lift residual of the groupoid."""
    if w.base.n_M != 0:
        raise DimensionError("the crosscheck runs over a point base only")
    if w.q > w.p:
        raise DimensionError(f"a ({w.p}, {w.q})-form has no top Weil component")
    rng = rng if rng is not None else np.random.default_rng(0)
    ctx.require(w.p)
    f = forms_to_functions(w)
    algebra = w.group.algebra
    empty = np.zeros(0, dtype=object)

    residual = 0.0
    components = 0
    for ukey in alt_keys(algebra.n, w.p - w.q):
        for vkey in sym_keys(algebra.n, w.q):
            forms_value = ve_omega_component(w, ukey, vkey)((), empty, [])
            for c in range(w.value_dim):
                functions_value = _function_side(f, algebra, ukey, vkey, c, ctx)
                residual = max(residual, abs(complex(forms_value[c] - functions_value)))
                components += 1
    lifts = max((lift_residual(f.groupoid, algebra.basis_vector(i), rng) for i in range(algebra.n)),
                default=0.0)
    report = {
        "form": w.name,
        "bidegree": [w.p, w.q],
        "components": components,
        "residual": residual,
        "lift_residual": lifts,
        "passed": residual <= tol and lifts <= tol,
    }
    LOGGER.info("crosscheck %s: residual %.3e over %d components, lift residual %.3e",
                w.name, residual, components, lifts)
    return report
