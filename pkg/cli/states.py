"""Check outcomes as they appear in reports."""

PASSED = "passed"
FAILED = "failed"
ERROR = "error"
SKIPPED = "skipped"
