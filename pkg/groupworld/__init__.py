# Matrix groups, nerves, cochains and quadrature
