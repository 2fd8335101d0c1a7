import math

# Class ids, label state |0> for A and |1> for B
CLASS_A = 0
CLASS_B = 1

# r^2 = 2/pi splits [-1,1]^2 into two regions of equal area
CIRCLE_RADIUS_SQUARED = 2 / math.pi

DEFAULT_BIAS = 0.5
DEFAULT_MASTER_SEED = 42
DEFAULT_TEST_SIZE = 4000
DEFAULT_LAYERS = 5
RANDOM_REPETITIONS = 20
RANDOM_TRAIN_SIZES = tuple(range(5, 75, 5))
FIXED_TRAIN_SIZES = (1, 25, 50, 75, 100, 125, 150, 200, 250)

FIDELITY = "fidelity"
TRACE = "trace"
COSTS = (FIDELITY, TRACE)

CIRCLE = "circle"
LINE = "line"
PATTERNS = (CIRCLE, LINE)

LBFGS = "lbfgs"
COBYLA = "cobyla"
NELDER_MEAD = "neldermead"
SLSQP = "slsqp"
METHODS = (LBFGS, COBYLA, NELDER_MEAD, SLSQP)
GRADIENT_METHODS = (LBFGS, SLSQP)

FIXED = "fixed"
RANDOM = "random"
MODES = (FIXED, RANDOM)

GRADIENTS = ("fd", "shift")

# Numerical tolerances for 64-bit complex arithmetic
NORM_TOLERANCE = 1e-10
UNITARY_TOLERANCE = 1e-10

# Optimizer defaults, copied into every report
MAX_EVALS = 10000
F_TOL = 1e-6
X_TOL = 1e-6
LBFGS_MEMORY = 10
RHO_BEGIN = 0.5
RHO_END = 1e-6
FD_STEP = 1e-6
ARMIJO_C1 = 1e-4
MAX_BACKTRACKS = 40
CURVATURE_EPSILON = 1e-10
SIMPLEX_OFFSET = 0.05
POWELL_DAMPING = 0.2

CONFIG_PATH = "reuploader.conf"
CONFIG_ENVIRONMENT = "REUPLOADER_CONFIG"
CHECKPOINT_FILENAME = "checkpoint.sqlite"
RESULTS_FILENAME = "results.csv"
