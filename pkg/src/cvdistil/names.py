"""
Shared names and numerical policy for :mod:`cvdistil`.

"""

RUNDIR_NAME = 'cvdistil'

# tolerances
SYMMETRY_TOL = 1e-10
SYMPLECTIC_TOL = 1e-10
PHYSICALITY_TOL = 1e-9
PURITY_TOL = 1e-8
CROSS_BLOCK_TOL = 1e-10
NORMALIZATION_TOL = 1e-9
SEPARABILITY_TOL = 1e-9
KAPPA_BISECTION_TOL = 1e-9

# homodyne grid policy
DEFAULT_GRID_POINTS = 64
MIN_GRID_POINTS = 8
SUPPORT_SIGMAS = 8.0

DEFAULT_PRUNE_TOL = 1e-12

# experiment defaults
DEFAULT_R = 0.7
DEFAULT_P = 0.5
PROTOCOLS = ('one_shot_squeeze', 'multicopy_squeeze', 'multicopy_ent')

CSV_COLUMNS = ('protocol', 'r', 'p', 't', 'N', 'd_over_sigma',
               'fidelity', 'x_variance', 'success_prob')
CSV_FLOAT_FORMAT = '%.9g'

# exit codes
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ENGINE = 3
