"""
Permutations with parity: full symmetric groups, unshuffles, restricted inversion counts.
Permutations are 0-based tuples: sigma[i] is the image of i.
"""

import itertools
from dataclasses import dataclass

from tensorcore.errors import DimensionError


@dataclass(frozen=True)
class SignedPermutation:
    sigma: tuple
    sign: int

    def __post_init__(self):
        if parity(self.sigma) != self.sign:
            raise DimensionError(f"sign {self.sign} does not match parity of {self.sigma}")

    @property
    def inverse(self) -> tuple:
        inv = [0] * len(self.sigma)
        for i, s in enumerate(self.sigma):
            inv[s] = i
        return tuple(inv)


def parity(sigma) -> int:
    """+1 for even permutations, -1 for odd ones (cycle decomposition)."""
    seen = [False] * len(sigma)
    sign = 1
    for start in range(len(sigma)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = sigma[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def permutations_with_sign(m: int) -> list:
    """All of S_m as SignedPermutation, identity first."""
    return [SignedPermutation(tuple(s), parity(s)) for s in itertools.permutations(range(m))]


def unshuffles(p: int, q: int) -> list:
    """(p, q)-unshuffles: increasing on the first p and on the last q positions."""
    if p < 0 or q < 0:
        raise DimensionError(f"negative unshuffle degrees ({p}, {q})")
    out = []
    for first in itertools.combinations(range(p + q), p):
        rest = tuple(i for i in range(p + q) if i not in first)
        sigma = first + rest
        out.append(SignedPermutation(sigma, parity(sigma)))
    return out


def sort_with_sign(indices) -> tuple:
    """Sort an index tuple; returns (sorted, sign) or (None, 0) on a repeated index."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return None, 0
    order = sorted(range(len(idx)), key=lambda i: idx[i])
    return tuple(idx[i] for i in order), parity(order)


def epsilon_sign(sigma, k: int) -> int:
    """(-1) to the number of pairs i < j < k (0-based values) that sigma^-1 puts out of order."""
    p = len(sigma)
    if k < 0 or k > p:
        raise DimensionError(f"k={k} outside 0..{p}")
    inv = [0] * p
    for i, s in enumerate(sigma):
        inv[s] = i
    count = sum(1 for i in range(k) for j in range(i + 1, k) if inv[i] > inv[j])
    return -1 if count % 2 else 1
