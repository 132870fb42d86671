"""
Chevalley-Eilenberg complexes with coefficients and the graded k-homogeneous
model of the action algebroid C* x g.

Koszul convention:
  d a(u_0..u_p) = sum_i (-1)^i rho(u_i) a(..^u_i..)
                + sum_{i<j} (-1)^{i+j} a([u_i, u_j], ..^u_i..^u_j..)
"""

import logging
import math
from fractions import Fraction

import numpy as np

from liealgebra.algebra import LieAlgebra
from liealgebra.representation import Representation, symmetric_power
from tensorcore.errors import DimensionError
from tensorcore.exact import rank
from tensorcore.jets import Jet, coefficient_of
from tensorcore.tensors import AltSymTensor, alt_keys, sym_keys

LOGGER = logging.getLogger(__name__)


def ce_differential(alpha: AltSymTensor, rep: Representation) -> AltSymTensor:
    """Koszul differential on Lambda^p g* (x) C.

    Flatness is not required: the connections of 2-term representations go
    through the same formula.
    """
    n, p = alpha.n, alpha.p
    if rep.algebra.n != n:
        raise DimensionError(f"form over dimension {n}, algebra of dimension {rep.algebra.n}")
    if rep.dim != alpha.value_dim:
        raise DimensionError(f"coefficients of dimension {alpha.value_dim}, representation of {rep.dim}")
    c, mats = rep.algebra.c, rep.rho
    out = AltSymTensor(n, p + 1, alpha.k, alpha.value_dim, alpha.m)
    if p + 1 > n:
        return out
    for key in alt_keys(n, p + 1):
        for sym in sym_keys(alpha.m, alpha.k):
            value = np.zeros(alpha.value_dim, dtype=object)
            for i, ui in enumerate(key):
                inner = alpha.get(key[:i] + key[i + 1:], sym)
                if any(x != 0 for x in inner):
                    value = value + (-1) ** i * (mats[ui] @ inner)
            for i in range(p + 1):
                for j in range(i + 1, p + 1):
                    rest = tuple(key[l] for l in range(p + 1) if l != i and l != j)
                    for l in range(n):
                        coeff = c[key[i], key[j], l]
                        if coeff != 0:
                            value = value + (-1) ** (i + j) * coeff * alpha.get((l,) + rest, sym)
            if any(x != 0 for x in value):
                out.coeffs[(key, sym)] = value
    return out


def ce_matrix(algebra: LieAlgebra, rep: Representation, p: int) -> np.ndarray:
    """Exact matrix of d_p: Lambda^p g* (x) C -> Lambda^{p+1} g* (x) C in canonical bases."""
    n, dim = algebra.n, rep.dim
    cols = len(alt_keys(n, p)) * dim
    rows = len(alt_keys(n, p + 1)) * dim if p + 1 <= n else 0
    out = np.zeros((rows, cols), dtype=object)
    for col in range(cols):
        unit = [0] * cols
        unit[col] = Fraction(1)
        image = ce_differential(AltSymTensor.from_vector(n, p, 0, dim, unit), rep)
        if rows:
            out[:, col] = image.to_vector()
    return out


def cohomology_dims(algebra: LieAlgebra, rep: Representation, k_sym: int = 0) -> list:
    """Betti numbers of H^p(g, S^k C), p = 0..n, by exact ranks."""
    rep.check_flat()
    coeff = symmetric_power(rep, k_sym)
    ranks = [rank(ce_matrix(algebra, coeff, p)) for p in range(algebra.n + 1)]
    betti = []
    for p in range(algebra.n + 1):
        dim_p = len(alt_keys(algebra.n, p)) * coeff.dim
        betti.append(dim_p - ranks[p] - (ranks[p - 1] if p > 0 else 0))
    LOGGER.debug("H(%s, S^%d %s): ranks=%s betti=%s", algebra.name, k_sym, rep.name, ranks, betti)
    return betti


def multinomial(sym: tuple) -> int:
    counts = {}
    for i in sym:
        counts[i] = counts.get(i, 0) + 1
    out = math.factorial(len(sym))
    for c in counts.values():
        out //= math.factorial(c)
    return out


def polynomial_value(t: AltSymTensor, alt: tuple, xi) -> object:
    """Value of the alt-component of T at (xi, .., xi): sum_J T_J * multinomial(J) * xi^J."""
    total = 0
    for sym in sym_keys(t.m, t.k):
        value = t.coeffs.get((alt, sym))
        if value is None:
            continue
        mono = 1
        for i in sym:
            mono = mono * xi[i]
        total = total + value[0] * multinomial(sym) * mono
    return total


class GradedForm:
    """Polynomial-coefficient p-form on the action algebroid C* x g.

    pieces[k] is an AltSymTensor[p, k] over g whose symmetric slots run over a
    basis of C*, i.e. an element of Lambda^p g* (x) S^k C.
    """

    def __init__(self, n: int, p: int, dim_c: int, pieces: dict | None = None):
        self.n = n
        self.p = p
        self.dim_c = dim_c
        self.pieces = {}
        for k, t in (pieces or {}).items():
            if (t.n, t.p, t.k, t.m, t.value_dim) != (n, p, k, dim_c, 1):
                raise DimensionError(f"piece of degree {k} does not fit ({n}, {p}, {dim_c})")
            self.pieces[k] = t

    def piece(self, k: int) -> AltSymTensor:
        return self.pieces.get(k, AltSymTensor(self.n, self.p, k, 1, self.dim_c))

    def evaluate_at(self, xi) -> AltSymTensor:
        """The Lambda^p g* form obtained by evaluating every piece at xi (jets allowed)."""
        out = AltSymTensor(self.n, self.p, 0, 1)
        for alt in alt_keys(self.n, self.p):
            total = 0
            for t in self.pieces.values():
                total = total + polynomial_value(t, alt, xi)
            out.coeffs[(alt, ())] = np.array([total], dtype=object)
        return out

    def __sub__(self, other: "GradedForm") -> "GradedForm":
        pieces = {}
        for k in set(self.pieces) | set(other.pieces):
            pieces[k] = self.piece(k) - other.piece(k)
        return GradedForm(self.n, self.p, self.dim_c, pieces)

    def is_zero(self) -> bool:
        return all(t.is_zero() for t in self.pieces.values())


def _to_values(t: AltSymTensor, keys: list) -> AltSymTensor:
    """Move the symmetric index into the value slot."""
    out = AltSymTensor(t.n, t.p, 0, len(keys))
    for alt in alt_keys(t.n, t.p):
        vec = [t.coeffs[(alt, sym)][0] if (alt, sym) in t.coeffs else 0 for sym in keys]
        if any(x != 0 for x in vec):
            out.coeffs[(alt, ())] = np.array(vec, dtype=object)
    return out


def _from_values(t: AltSymTensor, keys: list, k: int, dim_c: int) -> AltSymTensor:
    out = AltSymTensor(t.n, t.p, k, 1, dim_c)
    for (alt, _), vec in t.coeffs.items():
        for sym, x in zip(keys, vec):
            if x != 0:
                out.coeffs[(alt, sym)] = np.array([x], dtype=object)
    return out


def graded_differential(form: GradedForm, rep: Representation) -> GradedForm:
    """Differential of the action algebroid, piece by piece on S^k C."""
    pieces = {}
    for k, t in form.pieces.items():
        keys = sym_keys(form.dim_c, k)
        d = ce_differential(_to_values(t, keys), symmetric_power(rep, k))
        pieces[k] = _from_values(d, keys, k, form.dim_c)
    return GradedForm(form.n, form.p + 1, form.dim_c, pieces)


def hom_project_algebra(form: GradedForm, k: int) -> GradedForm:
    """Degree-k piece of a graded form: the k-homogeneous projection."""
    if k in form.pieces:
        return GradedForm(form.n, form.p, form.dim_c, {k: form.pieces[k]})
    return GradedForm(form.n, form.p, form.dim_c)


def hom_project_by_jet(form: GradedForm, k: int, xi) -> AltSymTensor:
    """(1/k!) d^k/dlambda^k of the form evaluated at lambda * xi, through an order-k jet."""
    lam = Jet.variable("lambda", order=max(k, 1))
    values = form.evaluate_at([lam * x for x in xi])
    return values.map_values(lambda v: np.array([coefficient_of(v[0], {"lambda": k})], dtype=object))
