"""
Exterior forms on R^n with polynomial coefficients and values in R^value_dim.

A form is stored as {(J, exps): vector}, J a strictly increasing tuple of
form indices and exps the exponent tuple of the monomial x^exps. Coefficients
are object arrays, exact when built from Fractions.
"""

import itertools
from fractions import Fraction

import numpy as np

from tensorcore.errors import DimensionError, TruncationError
from tensorcore.jets import Jet, coefficient_of, fresh_symbol
from tensorcore.permutations import sort_with_sign
from tensorcore.tensors import alt_keys, as_vector, zero_vector
from weil.constants import DEFAULT_POLY_DEGREE, JET_COEFF_TOL


def _bump(exps: tuple, a: int, by: int = 1) -> tuple:
    out = list(exps)
    out[a] += by
    return tuple(out)


def _nonzero(value) -> bool:
    return any(x != 0 for x in value)


class PolyForm:
    """sum_J f_J(x) dx^J with deg f_J <= max_degree."""

    def __init__(self, n: int, r: int, value_dim: int = 1, terms: dict | None = None,
                 max_degree: int = DEFAULT_POLY_DEGREE):
        if r < 0 or n < 0:
            raise DimensionError(f"invalid form degree {r} on R^{n}")
        self.n = n
        self.r = r
        self.value_dim = value_dim
        self.max_degree = max_degree
        self.terms = {}
        for (J, exps), value in (terms or {}).items():
            self._accumulate(tuple(J), tuple(exps), as_vector(value, value_dim))

    def _accumulate(self, J: tuple, exps: tuple, value):
        if len(J) != self.r or len(exps) != self.n:
            raise DimensionError(f"term {(J, exps)} does not fit an {self.r}-form on R^{self.n}")
        if J != tuple(sorted(J)) or len(set(J)) != len(J):
            raise DimensionError(f"non-canonical form indices {J}")
        if sum(exps) > self.max_degree and _nonzero(value):
            raise TruncationError(f"monomial of degree {sum(exps)} exceeds truncation {self.max_degree}")
        key = (J, exps)
        total = self.terms[key] + value if key in self.terms else value
        if _nonzero(total):
            self.terms[key] = total
        else:
            self.terms.pop(key, None)

    def like(self, r: int | None = None, value_dim: int | None = None) -> "PolyForm":
        return PolyForm(self.n, self.r if r is None else r,
                        self.value_dim if value_dim is None else value_dim, max_degree=self.max_degree)

    @classmethod
    def constant(cls, n: int, value, value_dim: int = 1, max_degree: int = DEFAULT_POLY_DEGREE) -> "PolyForm":
        return cls(n, 0, value_dim, {((), (0,) * n): value}, max_degree)

    @classmethod
    def coordinate(cls, n: int, a: int, max_degree: int = DEFAULT_POLY_DEGREE) -> "PolyForm":
        """The function x_a."""
        return cls(n, 0, 1, {((), _bump((0,) * n, a)): [1]}, max_degree)

    @classmethod
    def differential(cls, n: int, a: int, max_degree: int = DEFAULT_POLY_DEGREE) -> "PolyForm":
        """The 1-form dx_a."""
        return cls(n, 1, 1, {((a,), (0,) * n): [1]}, max_degree)

    @classmethod
    def from_function(cls, n: int, r: int, value_dim: int, fn, max_degree: int = DEFAULT_POLY_DEGREE,
                      tol: float = JET_COEFF_TOL) -> "PolyForm":
        """Recover a polynomial form from fn(x, vectors) -> value, evaluated on jets.

        x_a is a jet variable of order max_degree + 1, so a nonzero coefficient
        above the truncation is detected rather than dropped.
        """
        names = [fresh_symbol("x") for _ in range(n)]
        x = np.array([Jet.variable(s, max_degree + 1) for s in names], dtype=object)
        unit = np.eye(n, dtype=object) if n else np.zeros((0, 0), dtype=object)
        out = cls(n, r, value_dim, max_degree=max_degree)
        for J in alt_keys(n, r):
            value = as_vector(fn(x, [unit[j] for j in J]), value_dim)
            for exps in itertools.product(range(max_degree + 2), repeat=n):
                if sum(exps) > max_degree + 1:
                    continue
                mono = tuple(zip(names, exps))
                coeff = np.array([coefficient_of(v, mono) for v in value], dtype=object)
                if sum(exps) > max_degree:
                    if any(abs(complex(c)) > tol for c in coeff):
                        raise TruncationError(f"{fn!r} has terms of degree above {max_degree}")
                    continue
                if _nonzero(coeff):
                    out._accumulate(J, exps, coeff)
        return out

    @property
    def degree(self) -> int:
        """Largest total polynomial degree present; -1 for the zero form."""
        return max((sum(exps) for _, exps in self.terms), default=-1)

    def _check_same_space(self, other: "PolyForm"):
        if (self.n, self.r, self.value_dim) != (other.n, other.r, other.value_dim):
            raise DimensionError("forms live in different spaces")

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._check_same_space(other)
        out = self.like()
        out.max_degree = max(self.max_degree, other.max_degree)
        for form in (self, other):
            for (J, exps), value in form.terms.items():
                out._accumulate(J, exps, value)
        return out

    def __neg__(self) -> "PolyForm":
        out = self.like()
        out.terms = {key: -v for key, v in self.terms.items()}
        return out

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def __mul__(self, scalar) -> "PolyForm":
        out = self.like()
        for (J, exps), value in self.terms.items():
            out._accumulate(J, exps, scalar * value)
        return out

    __rmul__ = __mul__

    def apply(self, matrix) -> "PolyForm":
        """Act on values by a (rows x value_dim) matrix."""
        matrix = np.asarray(matrix, dtype=object)
        if matrix.shape[1:] != (self.value_dim,):
            raise DimensionError(f"matrix of shape {matrix.shape} on values of dimension {self.value_dim}")
        out = self.like(value_dim=matrix.shape[0])
        for (J, exps), value in self.terms.items():
            out._accumulate(J, exps, matrix @ value)
        return out

    def component(self, c: int) -> "PolyForm":
        """Scalar form of the c-th value coordinate."""
        out = self.like(value_dim=1)
        for (J, exps), value in self.terms.items():
            out._accumulate(J, exps, as_vector([value[c]], 1))
        return out

    def d(self) -> "PolyForm":
        out = self.like(r=self.r + 1)
        if self.r + 1 > self.n:
            return out
        for (J, exps), value in self.terms.items():
            for a in range(self.n):
                if exps[a] == 0 or a in J:
                    continue
                K, sign = sort_with_sign((a,) + J)
                out._accumulate(K, _bump(exps, a, -1), (sign * exps[a]) * value)
        return out

    def interior(self, field) -> "PolyForm":
        """Contraction with the linear vector field x -> field @ x."""
        field = np.asarray(field, dtype=object)
        if field.shape != (self.n, self.n):
            raise DimensionError(f"vector field matrix of shape {field.shape} on R^{self.n}")
        if self.r == 0:
            raise DimensionError("cannot contract a function")
        out = self.like(r=self.r - 1)
        for (J, exps), value in self.terms.items():
            for pos, j in enumerate(J):
                rest = J[:pos] + J[pos + 1:]
                for b in range(self.n):
                    if field[j, b] != 0:
                        out._accumulate(rest, _bump(exps, b), ((-1) ** pos * field[j, b]) * value)
        return out

    def lie(self, field) -> "PolyForm":
        """Cartan formula L_X = d i_X + i_X d."""
        if self.r == 0:
            return self.d().interior(field)
        return self.interior(field).d() + self.d().interior(field)

    def wedge(self, other: "PolyForm") -> "PolyForm":
        """(f dx^I) ^ (g dx^J) = f g dx^I ^ dx^J; one factor must be scalar valued."""
        if self.n != other.n:
            raise DimensionError(f"wedge of forms on R^{self.n} and R^{other.n}")
        if self.value_dim != 1 and other.value_dim != 1:
            raise DimensionError("one wedge factor must be scalar valued")
        out = PolyForm(self.n, self.r + other.r, max(self.value_dim, other.value_dim),
                       max_degree=max(self.max_degree, other.max_degree))
        if self.r + other.r > self.n:
            return out
        for (I, e1), v1 in self.terms.items():
            for (J, e2), v2 in other.terms.items():
                K, sign = sort_with_sign(I + J)
                if K is None:
                    continue
                exps = tuple(a + b for a, b in zip(e1, e2))
                value = v1[0] * v2 if self.value_dim == 1 else v1 * v2[0]
                out._accumulate(K, exps, sign * value)
        return out

    def evaluate(self, x, vectors=()) -> np.ndarray:
        """Value at the point x on r tangent vectors."""
        if len(vectors) != self.r:
            raise DimensionError(f"expected {self.r} tangent vectors")
        out = zero_vector(self.value_dim)
        for (J, exps), value in self.terms.items():
            mono = 1
            for xa, e in zip(x, exps):
                mono = mono * xa ** e
            det = 0
            for perm in itertools.permutations(range(self.r)):
                _, sign = sort_with_sign(perm)
                term = sign
                for slot, pos in enumerate(perm):
                    term = term * vectors[slot][J[pos]]
                det = det + term
            out = out + (mono * det) * value
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def max_abs(self) -> float:
        return max((abs(complex(x)) for v in self.terms.values() for x in v), default=0.0)

    def distance(self, other: "PolyForm") -> float:
        return (self - other).max_abs()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        return (self.n, self.r, self.value_dim) == (other.n, other.r, other.value_dim) and \
            (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        return f"PolyForm(n={self.n}, r={self.r}, value_dim={self.value_dim}, terms={len(self.terms)})"


def zero_form(n: int, r: int, value_dim: int = 1, max_degree: int = DEFAULT_POLY_DEGREE) -> PolyForm:
    return PolyForm(n, r, value_dim, max_degree=max_degree)


def random_form(n: int, r: int, value_dim: int, degree: int, rng, max_degree: int = DEFAULT_POLY_DEGREE,
                density: float = 0.6) -> PolyForm:
    """Random form with small integer coefficients (exact) and polynomial degree <= degree."""
    out = PolyForm(n, r, value_dim, max_degree=max_degree)
    for J in alt_keys(n, r):
        for exps in itertools.product(range(degree + 1), repeat=n):
            if sum(exps) > degree or rng.random() > density:
                continue
            out._accumulate(J, exps, as_vector([Fraction(int(rng.integers(-3, 4))) for _ in range(value_dim)], value_dim))
    return out
