DEFAULT_POLY_DEGREE = 6      # truncation D of polynomial coefficients
JET_COEFF_TOL = 1e-10        # coefficients of sampled jets below this count as zero
MAX_BASE_DIM = 3             # linear-action bases are kept small: forms on R^n_M
SPENCER_TOL = 1e-12          # float residual below which a W^{1,q} element is closed
