"""Shared constants across the library and the command line."""

from pathlib import Path

# Arithmetic
DEFAULT_PRIME = 5
MAX_PRIME = 1 << 16

# Sampling
DEFAULT_SEED = 1
DEFAULT_TRIALS = 50
RANDOM_MAX_DIM = 4
COMPLEX_MAX_DIM = 3
COMPLEX_MAX_LENGTH = 4
ISO_SEARCH_ATTEMPTS = 64
HOM_TARGETS_PER_RESOLUTION = 20
MIN_EXT_SHARE = 5  # at least trials // MIN_EXT_SHARE naturality samples with an Ext¹ part

# Reports
WITNESS_ELISION = 12

# Exit codes
EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT_ERROR = 2

# Bundled workspaces
WORKSPACES_DIR = Path(__file__).parent / "data" / "workspaces"
FIXTURE_A2_FILE = WORKSPACES_DIR / "a2.json"
FIXTURE_A3_FILE = WORKSPACES_DIR / "a3.json"

SUITES = ("torsion", "heart", "lemma21", "theorem")
