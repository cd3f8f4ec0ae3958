"""
Initialise the trotex module.

This file only contains some variables we need in the ``trotex`` name space.
"""

import os
from trotex.version import __version__, __app_name__

#: Tolerance (max-entry norm) for Hermiticity, idempotence and unitarity
#: checks on constructed matrices.
MATRIX_TOLERANCE = 1e-12

#: Maximum number of nested commutators evaluated by exact mode
#: :func:`trotex.core.terms.alpha_comm` before it gives up.
ALPHA_COMM_CAP = 10**6

#: Nested commutators with a max-entry below this value are treated as zero.
COMMUTATOR_ZERO = 1e-14

#: Extra orders beyond ``sigma * m`` that exact mode λ evaluates.
LAMBDA_J_CAP_OFFSET = 4

#: Largest ``|r|`` inverse-integer snapping will produce.
SNAP_CAP = 10**7

#: Largest condition number a least squares fit may have.
FIT_CONDITION_CAP = 1e12

#: Default overall failure probability of a measured estimate.
DEFAULT_DELTA = 0.01

#: Default number of uniform grid points for Lebesgue constant estimates.
LEBESGUE_GRID_POINTS = 100000

#: Number of eigendecompositions and exponentials a term sum keeps cached.
EXPONENTIAL_CACHE_SIZE = 512

#: Directory where logs and traces will be saved.
LOG_DIR = "/var/log/trotex/"

#: Default locations to look for config files in order of importance.
DEFAULT_CONFIG_FILE_LOCATIONS = [
    os.path.join(os.path.realpath(''), 'trotex.conf'),
    '~/.trotex.conf',
    '/etc/trotex/trotex.conf'
]
