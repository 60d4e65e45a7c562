import os

# Settings are read once at import time; override through the environment.
THREADS = max(1, int(os.getenv("LASSODOF_THREADS", str(os.cpu_count() or 1))))
LOG_LEVEL = os.getenv("LASSODOF_LOG_LEVEL", "INFO").upper()
LOG_FORMAT = "%(levelname)-5.5s [%(name)s] %(message)s"

SCHEMA_VERSION = "lassodof/1"

# Numerical defaults
SOLVER_TOL = 1e-10
MEMBERSHIP_TOL = 1e-6
ZERO_TOL = 1e-8
RANK_CUTOFF_EPS = 2.0 ** -46
RECONSTRUCTION_TOL = 1e-6
