"""Group-side constants: catalog names, sampling and quadrature defaults."""

GROUP_NAMES = ("torus:n", "u1", "su2", "so3", "heis3", "ut:n", "sl2")
COMPACT_PREFIXES = ("torus:", "u1", "su2", "so3")

# Sampled checks
NORMALIZATION_SAMPLES = 64
NORMALIZATION_TOL = 1e-12
AXIOM_TOL = 1e-10
RANDOM_ALGEBRA_SCALE = 1.0  # std of algebra coordinates behind random group elements
RANDOM_FIBER_SCALE = 1.0

# Homogeneous projection fallback
FD_STEP = 1e-2  # central-difference step when the lambda jet cannot be propagated

# Quadrature
DEFAULT_RESOLUTION = 32
QUADRATURE_TOL = 1e-10
