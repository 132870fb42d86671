"""Van Est operator defaults: jet budgets and acceptance tolerances."""

JET_BUDGET = 4  # nested first-order symbols per evaluation (p_max)
FORM_DEGREE_BUDGET = 2  # q_max for forms and the tangent groupoid
CHAIN_TOL = 1e-8
KHOM_TOL = 1e-9
FORMS_CHAIN_TOL = 1e-7
CROSSCHECK_TOL = 1e-6
REP_TOL = 1e-9
HOMOGENEITY_TOL = 1e-9
