"""Shared default constants.

Every seeded computation in the package defaults to DEFAULT_SEED so that
repeated runs are reproducible; the CLI additionally honours the
GRASSLEN_SEED environment variable.
"""

DEFAULT_SEED = 1729

# Relative singular-value threshold used by every numeric-rank decision.
DEFAULT_RANK_TOL = 1e-8

# Desk-scale cap on the number of dense coefficients handled by the
# secant-dimension grid (C(m, n) above this is skipped or rejected).
DESK_CAP = 100_000
