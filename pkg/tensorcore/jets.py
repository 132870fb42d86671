"""
Truncated multivariate jets.

A Jet is a polynomial in named infinitesimal symbols, each truncated at its own
order: order-1 symbols square to zero, a homogeneity symbol lambda may carry a
higher order. Arithmetic and the elementary functions propagate exact Taylor
coefficients, so extracting the coefficient of e1*e2*...*ep gives the mixed
derivative at zero with no truncation error.
"""

import itertools
import math

import numpy as np

from tensorcore.errors import TruncationError

_SYMBOLS = itertools.count()


def fresh_symbol(prefix: str = "e") -> str:
    """Process-unique symbol name for nested derivative evaluations."""
    return f"{prefix}#{next(_SYMBOLS)}"


def _merge_keys(k1: tuple, k2: tuple, orders: dict):
    if not k1:
        return k2
    if not k2:
        return k1
    powers = dict(k1)
    for var, e in k2:
        total = powers.get(var, 0) + e
        if total > orders[var]:
            return None
        powers[var] = total
    return tuple(sorted(powers.items()))


def _merge_orders(a: dict, b: dict) -> dict:
    if not b or a is b:
        return a
    if not a:
        return b
    out = dict(a)
    for var, order in b.items():
        if out.setdefault(var, order) != order:
            raise TruncationError(f"symbol {var!r} used with orders {out[var]} and {order}")
    return out


class Jet:
    """Element of R[symbols] modulo the truncation ideal."""

    __slots__ = ("terms", "orders")
    __array_ufunc__ = None

    def __init__(self, terms: dict | None = None, orders: dict | None = None):
        self.terms = terms if terms is not None else {}
        self.orders = orders if orders is not None else {}

    @classmethod
    def variable(cls, name: str, order: int = 1, value=0.0) -> "Jet":
        terms = {((name, 1),): 1}
        if value != 0:
            terms[()] = value
        return cls(terms, {name: order})

    @classmethod
    def constant(cls, value) -> "Jet":
        return cls({(): value}, {})

    @property
    def value(self):
        return self.terms.get((), 0)

    @property
    def symbols(self) -> tuple:
        return tuple(sorted(self.orders))

    def nilpotency(self) -> int:
        """Upper bound on the total degree of any surviving monomial."""
        return sum(self.orders.values())

    def coefficient(self, monomial) -> object:
        """Exact Taylor coefficient of a monomial given as {symbol: power} or ((symbol, power), ...)."""
        items = monomial.items() if isinstance(monomial, dict) else monomial
        key = []
        for var, power in items:
            if power == 0:
                continue
            if var in self.orders and power > self.orders[var]:
                raise TruncationError(f"{var}^{power} exceeds truncation order {self.orders[var]}")
            key.append((var, power))
        return self.terms.get(tuple(sorted(key)), 0)

    def part(self, var: str, power: int = 1):
        """Coefficient of var**power, as a jet in the remaining symbols."""
        if var in self.orders and power > self.orders[var]:
            raise TruncationError(f"{var}^{power} exceeds truncation order {self.orders[var]}")
        out = {}
        for key, c in self.terms.items():
            powers = dict(key)
            if powers.get(var, 0) != power:
                continue
            powers.pop(var, None)
            out[tuple(sorted(powers.items()))] = c
        orders = {v: o for v, o in self.orders.items() if v != var}
        return _collapse(Jet(out, orders))

    def _elementwise(self, other: np.ndarray, op) -> np.ndarray:
        out = np.empty(other.shape, dtype=object)
        for idx, x in np.ndenumerate(other):
            out[idx] = op(x)
        return out

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet({(): other}, {})

    def __add__(self, other):
        if isinstance(other, np.ndarray):
            return self._elementwise(other, lambda x: self + x)
        o = self._lift(other)
        terms = dict(self.terms)
        for key, c in o.terms.items():
            total = terms.get(key, 0) + c
            if total == 0:
                terms.pop(key, None)
            else:
                terms[key] = total
        return Jet(terms, _merge_orders(self.orders, o.orders))

    __radd__ = __add__

    def __neg__(self):
        return Jet({k: -c for k, c in self.terms.items()}, self.orders)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, np.ndarray):
            return self._elementwise(other, lambda x: self - x)
        return self + (-self._lift(other))

    def __rsub__(self, other):
        if isinstance(other, np.ndarray):
            return self._elementwise(other, lambda x: x - self)
        return self._lift(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, np.ndarray):
            return self._elementwise(other, lambda x: self * x)
        if not isinstance(other, Jet):
            return Jet({k: c * other for k, c in self.terms.items()}, self.orders)
        orders = _merge_orders(self.orders, other.orders)
        terms = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = _merge_keys(k1, k2, orders)
                if key is not None:
                    terms[key] = terms.get(key, 0) + c1 * c2
        return Jet({k: c for k, c in terms.items() if c != 0}, orders)

    def __rmul__(self, other):
        if isinstance(other, np.ndarray):
            return self._elementwise(other, lambda x: x * self)
        return Jet({k: other * c for k, c in self.terms.items()}, self.orders)

    def __truediv__(self, other):
        if isinstance(other, np.ndarray):
            return self._elementwise(other, lambda x: self / x)
        if not isinstance(other, Jet):
            return Jet({k: c / other for k, c in self.terms.items()}, self.orders)
        return self * reciprocal(other)

    def __rtruediv__(self, other):
        if isinstance(other, np.ndarray):
            return self._elementwise(other, lambda x: x / self)
        return reciprocal(self) * other

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)):
            return exp(log(self) * n)
        if n < 0:
            return reciprocal(self) ** (-n)
        out = Jet({(): 1}, {})
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __repr__(self):
        parts = []
        for key, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in key)
            parts.append(f"{c!r}" + (f"*{mono}" if mono else ""))
        return "Jet(" + (" + ".join(parts) or "0") + ")"


def _collapse(j: Jet):
    """Jets with no symbols left become plain scalars."""
    if not j.orders or all(key == () for key in j.terms):
        return j.terms.get((), 0)
    return j


def value_of(x):
    return x.value if isinstance(x, Jet) else x


def part_of(x, var: str, power: int = 1):
    if isinstance(x, Jet):
        return x.part(var, power)
    return x if power == 0 else 0


def coefficient_of(x, monomial):
    if isinstance(x, Jet):
        return x.coefficient(monomial)
    items = monomial.items() if isinstance(monomial, dict) else monomial
    return x if all(power == 0 for _, power in items) else 0


def _compose(x: Jet, derivatives) -> Jet:
    """Taylor composition f(x0 + n) = sum_j f^(j)(x0) n^j / j! with n nilpotent."""
    x0 = x.value
    n = x - x0
    out = Jet({(): derivatives(0, x0)}, x.orders)
    power = Jet({(): 1}, x.orders)
    for j in range(1, x.nilpotency() + 1):
        power = power * n
        if not power.terms:
            break
        out = out + power * (derivatives(j, x0) / math.factorial(j))
    return out


def _sin_derivative(j, x0):
    return (np.sin(x0), np.cos(x0), -np.sin(x0), -np.cos(x0))[j % 4]


def sin(x):
    if not isinstance(x, Jet):
        return np.sin(x)
    return _compose(x, _sin_derivative)


def cos(x):
    if not isinstance(x, Jet):
        return np.cos(x)
    return _compose(x, lambda j, x0: _sin_derivative(j + 1, x0))


def exp(x):
    if not isinstance(x, Jet):
        return np.exp(x)
    return _compose(x, lambda j, x0: np.exp(x0))


def log(x):
    if not isinstance(x, Jet):
        return np.log(x)
    return _compose(
        x, lambda j, x0: np.log(x0) if j == 0 else (-1) ** (j - 1) * math.factorial(j - 1) / x0 ** j
    )


def reciprocal(x):
    if not isinstance(x, Jet):
        return 1 / x
    x0 = x.value
    if x0 == 0:
        raise ZeroDivisionError("jet with zero constant part is not invertible")
    return _compose(x, lambda j, v: (-1) ** j * math.factorial(j) / v ** (j + 1))


def sqrt(x):
    if not isinstance(x, Jet):
        return np.sqrt(x)

    def deriv(j, x0):
        coeff = 1.0
        for i in range(j):
            coeff *= 0.5 - i
        return coeff * x0 ** (0.5 - j)

    return _compose(x, deriv)


def _atan_nilpotent(s: Jet) -> Jet:
    out = Jet({}, s.orders)
    power = s
    s2 = s * s
    j = 0
    while power.terms:
        out = out + power * ((-1) ** j / (2 * j + 1))
        power = power * s2
        j += 1
    return out


def atan2(y, x):
    """Angle chart; a jet argument expands around the angle of its constant part."""
    if not isinstance(y, Jet) and not isinstance(x, Jet):
        return np.arctan2(y, x)
    y0, x0 = value_of(y), value_of(x)
    theta0 = np.arctan2(y0, x0)
    ratio = (y * x0 - x * y0) / (x * x0 + y * y0)
    if not isinstance(ratio, Jet):
        return theta0
    return _atan_nilpotent(ratio - ratio.value) + theta0


def values_array(arr) -> np.ndarray:
    """Constant parts of an array of jets, as a plain numeric array."""
    arr = np.asarray(arr, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = value_of(x)
    return _numeric(out)


def part_array(arr, var: str, power: int = 1) -> np.ndarray:
    arr = np.asarray(arr, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = part_of(x, var, power)
    return out


def coefficient_array(arr, monomial) -> np.ndarray:
    arr = np.asarray(arr, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = coefficient_of(x, monomial)
    return _numeric(out)


def _numeric(out: np.ndarray) -> np.ndarray:
    try:
        return out.astype(complex if any(isinstance(v, complex) for v in out.flat) else float)
    except TypeError:
        return out


def has_jets(arr) -> bool:
    arr = np.asarray(arr, dtype=object)
    return any(isinstance(x, Jet) for x in arr.flat)


def jet_orders(arr) -> dict:
    orders = {}
    for x in np.asarray(arr, dtype=object).flat:
        if isinstance(x, Jet):
            orders = _merge_orders(orders, x.orders)
    return orders


def matrix_inverse(m) -> np.ndarray:
    """Inverse of a square matrix whose entries may be jets (Neumann series on the nilpotent part)."""
    m = np.asarray(m)
    if m.dtype != object or not has_jets(m):
        return np.linalg.inv(np.asarray(values_array(m), dtype=float))
    m0inv = np.linalg.inv(values_array(m))
    step = -(m0inv @ (m - values_array(m)))
    bound = sum(jet_orders(m).values())
    out = m0inv.astype(object)
    term = m0inv.astype(object)
    for _ in range(bound):
        term = step @ term
        out = out + term
    return out
