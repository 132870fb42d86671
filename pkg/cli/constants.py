"""CLI defaults: suites, tolerances, sample counts, exit codes."""

from pathlib import Path

SCHEMA_VERSION = 1
SCHEMA_PATH = Path(__file__).resolve().parent.parent / "schema" / f"job_config.v{SCHEMA_VERSION}.json"

# Suites, in the order they appear in reports
SUITES = ("ce", "weil", "ruth", "group", "vanest", "crosscheck", "kappa", "homological")

# Exit codes
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

# Worker pool
THREADS_ENV = "VANEST_THREADS"
DEFAULT_THREADS = 1
RESULT_POLL_SEC = 0.05

# Job defaults
DEFAULT_SAMPLES = 8  # sampled points per group-side check
DEFAULT_RESOLUTION = 16  # Haar quadrature nodes per angle
DEFAULT_MAX_SYM = 2  # S^k coefficients checked by the ce suite
DEFAULT_LEMMA_CASES = 100  # randomized complexes in the homological suite
DEFAULT_RUTH = "torus1-gauge"
DEFAULT_TOLERANCES = {
    "exact": 0.0,
    "projection": 1e-10,
    "chain": 1e-8,
    "homogeneous": 1e-9,
    "kappa": 1e-12,
    "ruth": 1e-9,
    "forms": 1e-7,
    "crosscheck": 1e-6,
    "normalization": 1e-12,
}

# Expression language
EXPR_FUNCTIONS = ("sin", "cos", "exp", "trace", "det")
MAX_EXPR_DEPTH = 64  # nested parentheses and calls
MAX_EXPR_POWER = 16
MAX_LITERAL_DIGITS = 300

# Built-in cochain families: degree -> expression over g1..gp
FAMILIES = {
    "offdiag": lambda p: " * ".join(f"g{k}[1][0]" for k in range(1, p + 1)),
    "shifted": lambda p: " * ".join(f"(g{k}[0][1] + g{k}[1][0] * g{k}[0][1])" for k in range(1, p + 1)),
    "trace": lambda p: " * ".join(f"(trace(g{k}) - trace(g{k}^0))" for k in range(1, p + 1)),
}

# Reports
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
CSV_FIELDS = ("suite", "name", "residual", "tolerance", "status", "seconds")
TIMESTAMP_FIELD = "generated_at"
