"""
Sparse alternating-symmetric tensors: elements of Lambda^p V* (x) S^k U* (x) W.

Tensors are stored by their values on canonical basis tuples: a strictly
increasing p-tuple of alternating indices and a weakly increasing k-tuple of
symmetric indices. Values are object arrays of length value_dim, so rational
inputs stay exact and float inputs stay float.
"""

import itertools
from fractions import Fraction

import numpy as np

from tensorcore.errors import DimensionError
from tensorcore.permutations import sort_with_sign


def alt_keys(n: int, p: int) -> list:
    return list(itertools.combinations(range(n), p))


def sym_keys(m: int, k: int) -> list:
    return list(itertools.combinations_with_replacement(range(m), k))


def zero_vector(dim: int) -> np.ndarray:
    return np.zeros(dim, dtype=object)


def as_vector(value, dim: int) -> np.ndarray:
    v = np.asarray(value, dtype=object).reshape(-1)
    if v.shape != (dim,):
        raise DimensionError(f"expected value of length {dim}, got {v.shape}")
    return v


class AltSymTensor:
    """Multilinear map alternating in p slots (dim n) and symmetric in k slots (dim m); p > n is the zero space."""

    def __init__(self, n: int, p: int, k: int = 0, value_dim: int = 1, m: int | None = None,
                 coeffs: dict | None = None):
        if p < 0 or k < 0:
            raise DimensionError(f"invalid degrees p={p}, k={k} for n={n}")
        self.n = n
        self.p = p
        self.k = k
        self.m = n if m is None else m
        self.value_dim = value_dim
        self.coeffs = {}
        for key, value in (coeffs or {}).items():
            alt, sym = key
            if alt != tuple(sorted(alt)) or len(set(alt)) != len(alt) or sym != tuple(sorted(sym)):
                raise DimensionError(f"non-canonical key {key}")
            if len(alt) != p or len(sym) != k:
                raise DimensionError(f"key {key} does not match degrees ({p}, {k})")
            self.coeffs[(tuple(alt), tuple(sym))] = as_vector(value, value_dim)

    @classmethod
    def from_function(cls, n, p, k, value_dim, fn, m=None) -> "AltSymTensor":
        """Build from fn(alt_key, sym_key) -> value evaluated on canonical keys."""
        t = cls(n, p, k, value_dim, m)
        for alt in alt_keys(n, p):
            for sym in sym_keys(t.m, k):
                value = as_vector(fn(alt, sym), value_dim)
                if any(x != 0 for x in value):
                    t.coeffs[(alt, sym)] = value
        return t

    @classmethod
    def from_vector(cls, n, p, k, value_dim, vector, m=None) -> "AltSymTensor":
        t = cls(n, p, k, value_dim, m)
        vector = list(vector)
        i = 0
        for alt in alt_keys(n, p):
            for sym in sym_keys(t.m, k):
                value = np.array(vector[i:i + value_dim], dtype=object)
                if any(x != 0 for x in value):
                    t.coeffs[(alt, sym)] = value
                i += value_dim
        if i != len(vector):
            raise DimensionError(f"vector of length {len(vector)} for a space of dimension {i}")
        return t

    def like(self, coeffs: dict | None = None) -> "AltSymTensor":
        return AltSymTensor(self.n, self.p, self.k, self.value_dim, self.m, coeffs)

    @property
    def dimension(self) -> int:
        return len(alt_keys(self.n, self.p)) * len(sym_keys(self.m, self.k)) * self.value_dim

    def keys(self):
        return itertools.product(alt_keys(self.n, self.p), sym_keys(self.m, self.k))

    def get(self, alt=(), sym=()) -> np.ndarray:
        """Value on arbitrary basis indices; alternating indices resolve by permutation sign."""
        alt_sorted, sign = sort_with_sign(alt)
        if alt_sorted is None:
            return zero_vector(self.value_dim)
        value = self.coeffs.get((alt_sorted, tuple(sorted(sym))))
        if value is None:
            return zero_vector(self.value_dim)
        return value if sign == 1 else -value

    def evaluate(self, us=(), vs=()) -> np.ndarray:
        """Multilinear evaluation on p vectors of length n and k vectors of length m."""
        if len(us) != self.p or len(vs) != self.k:
            raise DimensionError(f"expected {self.p}+{self.k} arguments")
        out = zero_vector(self.value_dim)
        for alt_idx in itertools.product(range(self.n), repeat=self.p):
            a = 1
            for u, i in zip(us, alt_idx):
                a = a * u[i]
            if a == 0:
                continue
            for sym_idx in itertools.product(range(self.m), repeat=self.k):
                b = a
                for v, j in zip(vs, sym_idx):
                    b = b * v[j]
                if b != 0:
                    out = out + b * self.get(alt_idx, sym_idx)
        return out

    def to_vector(self) -> list:
        out = []
        for key in self.keys():
            value = self.coeffs.get(key)
            out.extend(value if value is not None else [0] * self.value_dim)
        return out

    def map_values(self, fn, value_dim: int | None = None) -> "AltSymTensor":
        dim = self.value_dim if value_dim is None else value_dim
        t = AltSymTensor(self.n, self.p, self.k, dim, self.m)
        for key, value in self.coeffs.items():
            t.coeffs[key] = as_vector(fn(value), dim)
        return t

    def apply(self, matrix) -> "AltSymTensor":
        """Act on values by a (rows x value_dim) matrix."""
        matrix = np.asarray(matrix, dtype=object)
        return self.map_values(lambda v: matrix @ v, matrix.shape[0])

    def _check_same_space(self, other: "AltSymTensor"):
        if (self.n, self.p, self.k, self.m, self.value_dim) != (
                other.n, other.p, other.k, other.m, other.value_dim):
            raise DimensionError("tensors live in different spaces")

    def __add__(self, other: "AltSymTensor") -> "AltSymTensor":
        self._check_same_space(other)
        coeffs = dict(self.coeffs)
        for key, value in other.coeffs.items():
            coeffs[key] = coeffs[key] + value if key in coeffs else value
        return self.like(coeffs)

    def __neg__(self) -> "AltSymTensor":
        return self.like({key: -v for key, v in self.coeffs.items()})

    def __sub__(self, other: "AltSymTensor") -> "AltSymTensor":
        return self + (-other)

    def __mul__(self, scalar) -> "AltSymTensor":
        return self.like({key: scalar * v for key, v in self.coeffs.items()})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(x == 0 for v in self.coeffs.values() for x in v)

    def max_abs(self) -> float:
        return max((abs(complex(x)) for v in self.coeffs.values() for x in v), default=0.0)

    def distance(self, other: "AltSymTensor") -> float:
        return (self - other).max_abs()

    def to_float(self) -> "AltSymTensor":
        return self.map_values(lambda v: np.array([float(x) for x in v], dtype=object))

    def __repr__(self):
        return (f"AltSymTensor(n={self.n}, p={self.p}, k={self.k}, m={self.m}, "
                f"value_dim={self.value_dim}, nonzero={len(self.coeffs)})")


def basis_form(n: int, indices, value=1) -> AltSymTensor:
    """The scalar form e^{i1} ^ ... ^ e^{ip}: value +-1 on the given index set."""
    alt, sign = sort_with_sign(indices)
    if alt is None:
        return AltSymTensor(n, len(indices))
    return AltSymTensor(n, len(alt), coeffs={(alt, ()): [Fraction(sign) * value]})


def _product_value(a_value, b_value, a_dim, b_dim):
    if a_dim == 1:
        return a_value[0] * b_value
    return a_value * b_value[0]


def wedge(a: AltSymTensor, b: AltSymTensor) -> AltSymTensor:
    """(a ^ b)(u_1..u_{p+p'}) = sum over (p, p')-unshuffles of sgn * a(..) b(..).

    The symmetric slots, if any, come from a; b must be purely alternating.
    One of the two must be scalar valued.
    """
    if a.n != b.n:
        raise DimensionError(f"wedge of tensors over dimensions {a.n} and {b.n}")
    if b.k != 0:
        raise DimensionError("right wedge factor must have no symmetric slots")
    if a.value_dim != 1 and b.value_dim != 1:
        raise DimensionError("one wedge factor must be scalar valued")
    dim = max(a.value_dim, b.value_dim)
    out = AltSymTensor(a.n, a.p + b.p, a.k, dim, a.m)
    if a.p + b.p > a.n:
        return out
    for alt in alt_keys(a.n, a.p + b.p):
        positions = range(a.p + b.p)
        for first in itertools.combinations(positions, a.p):
            rest = tuple(i for i in positions if i not in first)
            _, sign = sort_with_sign(first + rest)
            b_value = b.coeffs.get((tuple(alt[i] for i in rest), ()))
            if b_value is None:
                continue
            a_alt = tuple(alt[i] for i in first)
            for sym in sym_keys(a.m, a.k):
                a_value = a.coeffs.get((a_alt, sym))
                if a_value is None:
                    continue
                term = sign * _product_value(a_value, b_value, a.value_dim, b.value_dim)
                key = (alt, sym)
                out.coeffs[key] = out.coeffs[key] + term if key in out.coeffs else term
    return out


def contract(a: AltSymTensor, u) -> AltSymTensor:
    """Insert u into the first alternating slot: (i_u a)(x_2..x_p) = a(u, x_2..x_p)."""
    if a.p == 0:
        raise DimensionError("cannot contract a tensor with no alternating slots")
    u = list(u)
    if len(u) != a.n:
        raise DimensionError(f"vector of length {len(u)} for dimension {a.n}")
    out = AltSymTensor(a.n, a.p - 1, a.k, a.value_dim, a.m)
    for alt in alt_keys(a.n, a.p - 1):
        for sym in sym_keys(a.m, a.k):
            value = zero_vector(a.value_dim)
            for i, ui in enumerate(u):
                if ui != 0 and i not in alt:
                    value = value + ui * a.get((i,) + alt, sym)
            if any(x != 0 for x in value):
                out.coeffs[(alt, sym)] = value
    return out
