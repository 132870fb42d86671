"""
Job configuration: JSON, validated against the shipped schema, then checked for
dimension consistency. Everything a suite needs is built from here.
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from functools import cached_property
from pathlib import Path

import jsonschema
import numpy as np

from cli.constants import (
    DEFAULT_LEMMA_CASES,
    DEFAULT_MAX_SYM,
    DEFAULT_RESOLUTION,
    DEFAULT_RUTH,
    DEFAULT_SAMPLES,
    DEFAULT_TOLERANCES,
    FAMILIES,
    SCHEMA_PATH,
)
from cli.expr import expression_cochain
from groupworld.groupoids import dual_action, lie_group, linear_action
from groupworld.groups import adjoint_rep, catalog_group, character_rep, dual_rep, trivial_rep
from liealgebra import representation
from ruth.catalog import catalog_ruth
from tensorcore.errors import ConfigError, StructureError, VanEstError
from tensorcore.exact import fraction_matrix
from vanest.constants import JET_BUDGET

LOGGER = logging.getLogger(__name__)


def load_schema(path: Path = SCHEMA_PATH) -> dict:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


@dataclass
class CochainSpec:
    name: str
    degree: int
    expr: str


@dataclass
class JobConfig:
    seed: int
    group: str
    representation: dict = field(default_factory=lambda: {"kind": "trivial", "dim": 1})
    ruth: str = DEFAULT_RUTH
    groupoid: str = "group"
    cochains: list = field(default_factory=list)
    suites: list = field(default_factory=lambda: ["ce"])
    tolerances: dict = field(default_factory=dict)
    samples: int = DEFAULT_SAMPLES
    resolution: int = DEFAULT_RESOLUTION
    max_sym: int = DEFAULT_MAX_SYM
    lemma_cases: int = DEFAULT_LEMMA_CASES

    @classmethod
    def from_dict(cls, data: dict) -> "JobConfig":
        try:
            jsonschema.validate(instance=data, schema=load_schema())
        except jsonschema.ValidationError as e:
            where = "/".join(str(p) for p in e.absolute_path) or "<root>"
            raise ConfigError(f"{where}: {e.message}") from e
        cochains = []
        for i, entry in enumerate(data.get("cochains", [])):
            expr = entry.get("expr") or FAMILIES[entry["family"]](entry["degree"])
            cochains.append(CochainSpec(entry.get("name", entry.get("family", f"f{i}")), entry["degree"], expr))
        cfg = cls(
            seed=data["seed"],
            group=data["group"],
            representation=data.get("representation", {"kind": "trivial", "dim": 1}),
            ruth=data.get("ruth", DEFAULT_RUTH),
            groupoid=data.get("groupoid", "group"),
            cochains=cochains,
            suites=list(data.get("suites", ["ce"])),
            tolerances={**DEFAULT_TOLERANCES, **data.get("tolerances", {})},
            samples=data.get("samples", DEFAULT_SAMPLES),
            resolution=data.get("resolution", DEFAULT_RESOLUTION),
            max_sym=data.get("max_sym", DEFAULT_MAX_SYM),
            lemma_cases=data.get("lemma_cases", DEFAULT_LEMMA_CASES),
        )
        cfg.check()
        return cfg

    def to_dict(self) -> dict:
        return asdict(self)

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])

    def check(self):
        """Build every object once so inconsistent dimensions surface as ConfigError."""
        try:
            self.group_obj
            self.algebra_rep
            if self.representation["kind"] != "matrices":
                self.group_rep
            for spec in self.cochains:
                if spec.degree > JET_BUDGET:
                    raise ConfigError(f"cochain {spec.name}: degree {spec.degree} above the jet budget {JET_BUDGET}")
                self.cochain(spec)
        except StructureError as e:
            raise ConfigError(str(e)) from e
        LOGGER.debug("config ok: %s, rep %s, %d cochains, suites %s", self.group, self.representation["kind"],
                      len(self.cochains), self.suites)

    @cached_property
    def group_obj(self):
        return catalog_group(self.group)

    @cached_property
    def group_rep(self):
        kind = self.representation["kind"]
        group = self.group_obj
        if kind == "trivial":
            return trivial_rep(group, self.representation.get("dim", 1))
        if kind == "adjoint":
            return adjoint_rep(group)
        if kind == "coadjoint":
            return dual_rep(adjoint_rep(group))
        if kind == "character":
            if "weights" not in self.representation:
                raise ConfigError("a character representation needs weights")
            try:
                return character_rep(group, self.representation["weights"])
            except VanEstError as e:
                raise ConfigError(str(e)) from e
        raise ConfigError("representations given by matrices exist on the algebra side only")

    @cached_property
    def algebra_rep(self):
        kind = self.representation["kind"]
        algebra = self.group_obj.algebra
        if kind == "trivial":
            return representation.trivial(algebra, self.representation.get("dim", 1))
        if kind == "adjoint":
            return representation.adjoint(algebra)
        if kind == "coadjoint":
            return representation.coadjoint(algebra)
        if kind == "character":
            rho = self.group_rep.derivative().rho
            return representation.from_matrices(algebra, [fraction_matrix(m) for m in rho], self.group_rep.name)
        try:
            mats = [fraction_matrix(m) for m in self.representation.get("matrices", [])]
            return representation.from_matrices(algebra, mats)
        except (ValueError, ZeroDivisionError, VanEstError) as e:
            raise ConfigError(f"representation matrices: {e}") from e

    @cached_property
    def ruth_obj(self):
        return catalog_ruth(self.ruth)

    @cached_property
    def groupoid_obj(self):
        if self.groupoid == "group":
            return lie_group(self.group_obj)
        if self.groupoid == "action":
            return linear_action(self.group_rep)
        return dual_action(self.group_rep)

    def cochain(self, spec: CochainSpec):
        return expression_cochain(spec.expr, self.groupoid_obj, spec.degree, spec.name)

    def rng(self, check: str) -> np.random.Generator:
        """Independent stream per check name, so suites can run in any order."""
        return np.random.default_rng([self.seed, *check.encode("utf-8")])


def load_config(path) -> JobConfig:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    LOGGER.info("loaded job config %s", path)
    return JobConfig.from_dict(data)
