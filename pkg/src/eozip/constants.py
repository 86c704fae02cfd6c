from __future__ import annotations

# Weyl group enumeration is BFS over 2^g * g! elements.
MAX_RANK_WEYL = 5

MAX_FIELD_DEGREE = 8
MAX_WITT_PRECISION = 8
DEFAULT_WITT_PRECISION = 2

# Desk-scale bounds enforced by the command line; the library itself is unbounded.
CLI_MAX_G = 4
CLI_MAX_Q = 25

# Brute-force orbit searches and point counts run over all of Sp_{2g}(F_q).
ORACLE_MAX_G = 2
ORACLE_MAX_Q = 3
COUNT_MAX_G = 2
COUNT_Q_VALUES = (2, 3, 4, 5)
MAX_GROUP_ORDER = 60_000

FREENESS_SAMPLES = 10_000
DEFAULT_SEED = 0
DEFAULT_TRIALS = 100

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID_INPUT = 3
EXIT_SCALE = 4
EXIT_VIOLATION = 5

GOLDEN_FILES = {
    "weyl": "weyl_tables.json",
    "strata": "strata_tables.json",
    "standard_zips": "standard_zips.json",
}
