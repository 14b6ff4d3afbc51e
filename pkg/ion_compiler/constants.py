import os
from math import pi

from dotenv import load_dotenv

load_dotenv()

# default trapped-ion machine, ions named 1..5
DEFAULT_N_QUBITS = 5
DEFAULT_TAU_1Q_US = 20.0
DEFAULT_TAU_2Q_US = 235.0
DEFAULT_EPSILON = 0.01
DEFAULT_BIG_E = 0.04
DEFAULT_NEGATIVE_PAIRS = ((1, 3), (1, 5), (2, 4))

TOL = float(os.environ.get("ION_COMPILE_TOL", 1e-9))
LOG_LEVEL = os.environ.get("ION_COMPILE_LOG_LEVEL", "INFO").upper()
VERIFY_TOL = 1e-8
MAX_DENSE_QUBITS = 6
EXHAUSTIVE_MAPPING_LIMIT = 7
PI_DENOMINATOR_LIMIT = 64
LEDGER_DECIMALS = 6

HALF_PI = pi / 2
QUARTER_PI = pi / 4
