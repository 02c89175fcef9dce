"""Default limits and precision settings.

Every value here is a default only: the functions that use them take the
same quantity as a keyword argument, and the command line exposes the ones
users are expected to change.
"""
import os

# perm-core
MAX_DEGREE = 10_000

# stabchain / structure
ELEMENT_CAP = 10**6
COMPOSITION_CAP = 10**6
QUOTIENT_CAP = 10**6

# intervals
DEFAULT_PRECISION = 128
MAX_PRECISION = 1024
WIDTH_FLOOR_BITS = 200
GUARD_BITS = 32
DECIMAL_PLACES = 30

# inequalities
SWEEP_NMIN = 20_604
SWEEP_NMAX = 10**6
KP_THRESHOLD = 20_603

# enumeration
EXHAUSTIVE_MAX_DEGREE = 7
OPT_IN_DEGREE = 8
BRUTE_FORCE_MAX_DEGREE = 5
FIXTURE_MAX_DEGREE = 81

CACHE_ENV_VAR = "ABELQUOT_CACHE"


def cache_dir():
    """Directory used to cache transitive-group catalogs.

    Returns
    -------
    str or None
        Absolute path taken from the ABELQUOT_CACHE environment variable,
        or None when caching is disabled.
    """
    path = os.environ.get(CACHE_ENV_VAR)
    if not path:
        return None
    return os.path.abspath(path)
