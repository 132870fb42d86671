"""Machine-readable reports: canonical JSON plus a one-row-per-check CSV summary."""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

from cli import states
from cli.constants import CSV_FIELDS, EXIT_FAILED, EXIT_OK, SCHEMA_VERSION, SUITES, TIMESTAMP_FIELD
from tensorcore.errors import ConfigError


def _clean(value):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings, tuples to lists."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return int(value)
    if hasattr(value, "item"):
        return _clean(value.item())
    if isinstance(value, complex):
        value = abs(value)
    value = float(value)
    return value if math.isfinite(value) else str(value)


@dataclass
class CheckResult:
    suite: str
    name: str
    residual: float
    tolerance: float
    status: str
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    @classmethod
    def measured(cls, suite: str, name: str, residual, tolerance: float, seconds: float = 0.0,
                 **details) -> "CheckResult":
        residual = float(abs(residual))
        status = states.PASSED if residual <= tolerance else states.FAILED
        return cls(suite, name, residual, tolerance, status, seconds, details)

    @classmethod
    def error(cls, suite: str, name: str, message: str, seconds: float = 0.0) -> "CheckResult":
        return cls(suite, name, math.nan, 0.0, states.ERROR, seconds, {"message": message})

    @property
    def passed(self) -> bool:
        return self.status == states.PASSED

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "suite": self.suite,
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "status": self.status,
        }
        if timing:
            d["seconds"] = round(self.seconds, 6)
        if self.details:
            d["details"] = self.details
        return _clean(d)


@dataclass
class Report:
    config: dict
    checks: list = field(default_factory=list)
    generated_at: str = ""

    def sorted_checks(self) -> list:
        order = {name: i for i, name in enumerate(SUITES)}
        return sorted(self.checks, key=lambda c: (order.get(c.suite, len(order)), c.suite, c.name))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def exit_code(self) -> int:
        return EXIT_OK if self.passed else EXIT_FAILED

    def summary(self) -> dict:
        counts = {s: 0 for s in (states.PASSED, states.FAILED, states.ERROR, states.SKIPPED)}
        for c in self.checks:
            counts[c.status] = counts.get(c.status, 0) + 1
        return counts

    def to_dict(self, stable: bool = False) -> dict:
        """stable=True drops the timestamp and wall times, leaving what a seed determines."""
        d = {
            "version": SCHEMA_VERSION,
            "config": self.config,
            "checks": [c.to_dict(timing=not stable) for c in self.sorted_checks()],
            "summary": self.summary(),
            "passed": self.passed,
        }
        if not stable:
            d[TIMESTAMP_FIELD] = self.generated_at or datetime.now(timezone.utc).isoformat(timespec="seconds")
        return _clean(d)

    def to_json(self, stable: bool = False, indent: int = 2) -> str:
        return json.dumps(self.to_dict(stable), sort_keys=True, indent=indent, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for c in self.sorted_checks():
            row = c.to_dict()
            writer.writerow({k: row.get(k, "") for k in CSV_FIELDS})
        return out.getvalue()

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        try:
            checks = [CheckResult(c["suite"], c["name"], float(c["residual"]), float(c["tolerance"]), c["status"],
                                  float(c.get("seconds", 0.0)), c.get("details", {})) for c in data["checks"]]
            return cls(data.get("config", {}), checks, data.get(TIMESTAMP_FIELD, ""))
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"not a report: {e}") from e


def load_report(path) -> Report:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return Report.from_dict(data)
