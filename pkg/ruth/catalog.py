"""Named RUTH examples used by the test suites and the CLI."""

import numpy as np

from groupworld.groups import adjoint_rep, catalog_group, character_rep
from ruth.group_side import Ruth2TermGrp
from tensorcore.errors import ConfigError

RUTH_NAMES = ("torus1-rep", "torus1-gauge", "torus2-gauge", "su2-adjoint", "su2-gauge")

_TORUS1_GAUGE = np.array([[0.5, -0.25], [0.75, 0.3]])
_TORUS2_GAUGE = (np.array([[0.4, 0.1], [-0.2, 0.6]]), np.array([[0.3, -0.5], [0.2, 0.1]]))


def _block(g, i):
    return np.asarray(g, dtype=object)[2 * i:2 * i + 2, 2 * i:2 * i + 2]


def catalog_ruth(name: str) -> Ruth2TermGrp:
    if name == "torus1-rep":
        group = catalog_group("torus:1")
        return Ruth2TermGrp.from_representations(None, character_rep(group, [1]), name=name)
    if name == "torus1-gauge":
        group = catalog_group("torus:1")
        rep = character_rep(group, [1])
        base = Ruth2TermGrp.from_representations(rep, rep, np.eye(2), name="torus1-id")
        return base.gauge(lambda g: _TORUS1_GAUGE @ (np.asarray(g, dtype=object) - np.eye(2)), name)
    if name == "torus2-gauge":
        group = catalog_group("torus:2")
        base = Ruth2TermGrp.from_representations(character_rep(group, [1, 0]), character_rep(group, [0, 1]),
                                                 name="torus2-split")
        a, b = _TORUS2_GAUGE
        return base.gauge(lambda g: a @ (_block(g, 0) - np.eye(2)) + b @ (_block(g, 1) - np.eye(2)) @ _block(g, 0),
                          name)
    if name in ("su2-adjoint", "su2-gauge"):
        group = catalog_group("su2")
        ad = adjoint_rep(group)
        base = Ruth2TermGrp.from_representations(ad, ad, np.eye(3), name="su2-adjoint")
        if name == "su2-adjoint":
            return base
        m = np.array([[0.2, 0.1, 0.0], [0.0, -0.3, 0.1], [0.1, 0.0, 0.25]])
        return base.gauge(lambda g: m @ (ad(g) - np.eye(3)), name)
    raise ConfigError(f"unknown RUTH example {name!r}; expected one of {', '.join(RUTH_NAMES)}")
