"""RUTH constants: tolerances and sample counts for the structure checks."""

SQUARE_TOL = 1e-9  # D^2 residual accepted for float data; exact data must give 0
PSI_TOL = 1e-9  # sampled Psi o (-D_G) = delta o Psi
NORMALIZATION_TOL = 1e-12
IMAGE_TOL = 1e-8  # delta Psi(mu) must lie in the image of Psi
SAMPLES = 16  # random composable tuples per sampled check
