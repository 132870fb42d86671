"""
Exact check of the homological lemma for a chain map between finite cochain complexes.

A complex is a list of matrices d[p]: C^p -> C^{p+1}; projections P[p] and the map
F[p] are given per degree. When P are cochain projections commuting with F, the
verdicts of F on cohomology are compared with those of F restricted to im P.
"""

import logging

import numpy as np

from tensorcore.errors import DimensionError, HypothesisError
from tensorcore.exact import column_space, columns_matrix, fraction_matrix, is_zero_matrix, nullspace, rank, solve

LOGGER = logging.getLogger(__name__)


def _dims(d: list, P: list) -> list:
    if len(P) != len(d) + 1:
        raise DimensionError(f"{len(d)} differentials need {len(d) + 1} projections, got {len(P)}")
    return [p.shape[0] for p in P]


def _check_complex(name: str, d: list, dims: list):
    for p, dp in enumerate(d):
        if dp.shape != (dims[p + 1], dims[p]):
            raise DimensionError(f"{name}: d[{p}] has shape {dp.shape}, expected {(dims[p + 1], dims[p])}")
        if p + 1 < len(d) and not is_zero_matrix(d[p + 1] @ dp):
            raise HypothesisError(f"{name}: d[{p + 1}] d[{p}] != 0")


def _check_hypotheses(d1, d2, P1, P2, F, dims1, dims2):
    for name, d, P, dims in (("source", d1, P1, dims1), ("target", d2, P2, dims2)):
        _check_complex(name, d, dims)
        for p, proj in enumerate(P):
            if proj.shape != (dims[p], dims[p]):
                raise DimensionError(f"{name}: P[{p}] is not square")
            if not is_zero_matrix(proj @ proj - proj):
                raise HypothesisError(f"{name}: P[{p}] is not idempotent")
        for p, dp in enumerate(d):
            if not is_zero_matrix(P[p + 1] @ dp - dp @ P[p]):
                raise HypothesisError(f"{name}: P does not commute with d[{p}]")
    for p, fp in enumerate(F):
        if fp.shape != (dims2[p], dims1[p]):
            raise DimensionError(f"F[{p}] has shape {fp.shape}, expected {(dims2[p], dims1[p])}")
        if not is_zero_matrix(fp @ P1[p] - P2[p] @ fp):
            raise HypothesisError(f"F[{p}] does not commute with the projections")
        if p < len(d1) and not is_zero_matrix(F[p + 1] @ d1[p] - d2[p] @ fp):
            raise HypothesisError(f"F is not a chain map in degree {p}")


def _cycles_boundaries(d: list, dims: list, p: int) -> tuple:
    if p < len(d):
        cycles = nullspace(d[p]) if dims[p] else []
    else:
        cycles = [v for v in np.eye(dims[p], dtype=int).astype(object)]
    boundaries = column_space(d[p - 1]) if p > 0 and 0 not in d[p - 1].shape else []
    return cycles, boundaries


def cohomology_verdicts(d1: list, d2: list, F: list) -> list:
    """Per degree: dimensions of H^p on both sides and whether F is injective / surjective there."""
    dims1 = [F[p].shape[1] for p in range(len(F))]
    dims2 = [F[p].shape[0] for p in range(len(F))]
    out = []
    for p in range(len(F)):
        Z1, B1 = _cycles_boundaries(d1, dims1, p)
        Z2, B2 = _cycles_boundaries(d2, dims2, p)
        images = [F[p] @ z for z in Z1]
        joint = rank(columns_matrix(images + B2, dims2[p])) if dims2[p] else 0
        rank_b2 = len(B2)
        kernel = len(Z1) - (joint - rank_b2)
        out.append({
            "degree": p,
            "h_source": len(Z1) - len(B1),
            "h_target": len(Z2) - len(B2),
            "injective": kernel == len(B1),
            "surjective": joint == len(Z2),
        })
    return out


def _restrict(d: list, P: list, dims: list) -> tuple:
    """Matrices of d on im P in the bases given by the pivot columns of P."""
    bases = [columns_matrix(column_space(proj), dims[p]) if dims[p] else np.empty((0, 0), dtype=object)
             for p, proj in enumerate(P)]
    restricted = []
    for p, dp in enumerate(d):
        target, source = bases[p + 1], bases[p]
        if 0 in target.shape or 0 in source.shape:
            restricted.append(np.zeros((target.shape[1], source.shape[1]), dtype=object))
        else:
            restricted.append(solve(target, dp @ source))
    return bases, restricted


def homological_lemma_check(d1: list, d2: list, P1: list, P2: list, F: list) -> dict:
    """Verify the hypotheses exactly, then report cohomology verdicts of F and of F on im P.

    holds[p] is True when every verdict F has in degree p is kept by the restriction.
    """
    d1, d2 = [fraction_matrix(m) for m in d1], [fraction_matrix(m) for m in d2]
    P1, P2 = [fraction_matrix(m) for m in P1], [fraction_matrix(m) for m in P2]
    F = [fraction_matrix(m) for m in F]
    dims1, dims2 = _dims(d1, P1), _dims(d2, P2)
    if len(d1) != len(d2) or len(F) != len(P1):
        raise DimensionError("the two complexes and F must cover the same degrees")
    _check_hypotheses(d1, d2, P1, P2, F, dims1, dims2)

    q1, r1 = _restrict(d1, P1, dims1)
    q2, r2 = _restrict(d2, P2, dims2)
    restricted_f = []
    for p, fp in enumerate(F):
        if 0 in q2[p].shape or 0 in q1[p].shape:
            restricted_f.append(np.zeros((q2[p].shape[1], q1[p].shape[1]), dtype=object))
        else:
            restricted_f.append(solve(q2[p], fp @ q1[p]))

    full = cohomology_verdicts(d1, d2, F)
    restricted = cohomology_verdicts(r1, r2, restricted_f)
    holds = []
    for a, b in zip(full, restricted):
        ok = (b["injective"] or not a["injective"]) and (b["surjective"] or not a["surjective"])
        holds.append(ok)
        if not ok:
            LOGGER.warning("degree %d: restriction loses %s", a["degree"], a)
    LOGGER.info("homological lemma over %d degrees: %s", len(F), "holds" if all(holds) else "fails")
    return {"full": full, "restricted": restricted, "holds": holds}


def _elementary_complex(summands, scales=None) -> tuple:
    """Sum of Q in one degree ("pt", p) and Q -> Q ("int", p) over degrees 0..2, with F diagonal."""
    dims = [0, 0, 0]
    slots = []
    for kind, p in summands:
        here = [(p, dims[p])]
        dims[p] += 1
        if kind == "int":
            here.append((p + 1, dims[p + 1]))
            dims[p + 1] += 1
        slots.append(here)
    d = [np.zeros((dims[p + 1], dims[p]), dtype=int) for p in range(2)]
    F = [np.zeros((dims[p], dims[p]), dtype=int) for p in range(3)]
    for i, here in enumerate(slots):
        if len(here) == 2:
            (p, a), (_, b) = here
            d[p][b, a] = 1
        for p, a in here:
            F[p][a, a] = 1 if scales is None else scales[i]
    return d, F, dims


def _block(a, b) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=object)
    out[:a.shape[0], :a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out


def _unitriangular(rng, n: int) -> tuple:
    if n == 0:
        empty = np.empty((0, 0), dtype=object)
        return empty, empty
    t = np.eye(n, dtype=int)
    for i in range(n):
        for j in range(i + 1, n):
            t[i, j] = int(rng.integers(-2, 3))
    t = fraction_matrix(t)
    return t, solve(t, fraction_matrix(np.eye(n, dtype=int)))


def _random_summands(rng) -> list:
    out = []
    for _ in range(int(rng.integers(1, 4))):
        p = int(rng.integers(0, 3))
        kind = "int" if p < 2 and rng.random() < 0.5 else "pt"
        out.append((kind, p))
    return out


def random_lemma_instance(rng) -> dict:
    """Three-term complexes S (+) K on both sides, hidden behind random unitriangular frames.

    P projects onto S and F is diagonal on the elementary summands. "oracle" holds the
    bare S blocks (d1, d2, F): their verdicts are what the restriction to im P must give.
    """
    kept, dropped = _random_summands(rng), _random_summands(rng)
    scales = [int(rng.integers(0, 3)) for _ in kept]
    other = [int(rng.integers(0, 3)) for _ in dropped]
    dS1, FS, dims_s = _elementary_complex(kept, scales)
    dS2, _, _ = _elementary_complex(kept)
    dK, FK, dims_k = _elementary_complex(dropped, other)
    frames1 = [_unitriangular(rng, dims_s[p] + dims_k[p]) for p in range(3)]
    frames2 = [_unitriangular(rng, dims_s[p] + dims_k[p]) for p in range(3)]

    def conjugate(frames, m, p_out, p_in):
        return frames[p_out][0] @ fraction_matrix(m) @ frames[p_in][1]

    P = [_block(np.eye(dims_s[p], dtype=int), np.zeros((dims_k[p], dims_k[p]), dtype=int)) for p in range(3)]
    return {
        "d1": [conjugate(frames1, _block(dS1[p], dK[p]), p + 1, p) for p in range(2)],
        "d2": [conjugate(frames2, _block(dS2[p], dK[p]), p + 1, p) for p in range(2)],
        "P1": [conjugate(frames1, P[p], p, p) for p in range(3)],
        "P2": [conjugate(frames2, P[p], p, p) for p in range(3)],
        "F": [frames2[p][0] @ fraction_matrix(_block(FS[p], FK[p])) @ frames1[p][1] for p in range(3)],
        "oracle": ([fraction_matrix(m) for m in dS1], [fraction_matrix(m) for m in dS2],
                   [fraction_matrix(m) for m in FS]),
    }
