# Environment variable capping the number of worker threads
ENV_THREADS = "REACHSCHED_THREADS"

# Numerical tolerances
TOL_VERTEX = 1e-9
TOL_INVERSE = 1e-10
TOL_ROUND_TRIP = 1e-8
TOL_DYNAMICS = 1e-9
TOL_VIOLATION = 1e-9
TOL_CHEBYSHEV = 1e-7

# Class-K algebra
CLASS_K_HORIZON = 1e6
CLASS_K_GRID_POINTS = 1000
MONOTONE_EPS = 1e-6

# CLF grid verification
DEFAULT_GRID_DENSITY = 21
MAX_GRID_PAIRS = 200000
VERIFICATION_SEED = 20200101
MAX_REPORTED_VIOLATIONS = 20

# Containment sampling resolution for X_I, X_F in X
CONTAINMENT_RESOLUTION = 1e-2

# RRT defaults
RRT_N_CONTROLS = 16
RRT_GOAL_BIAS = 0.1
RRT_MAX_ITERATIONS = 100000
RRT_VELOCITY_WEIGHT = 0.5

# Symbolic abstraction
DEFAULT_M = 100
NAIVE_TREE_L_CAP = 20

# Simulation
TRAVERSE_STEPS = 1000
WMAX_BISECT_TOL = 0.005

# Artifact file names
sREFERENCE_CSV = "reference.csv"
sREFERENCE_JSON = "reference.json"
sENVELOPE_CSV = "envelope.csv"
sENVELOPE_JSON = "envelope.json"
sABSTRACTION_JSON = "abstraction.json"
sSCHEDULE_JSON = "schedule.json"
sSTATS_JSON = "stats.json"
sSWEEP_JSON = "sweep.json"
sVERIFY_JSON = "verify_clf.json"
sMANIFEST_JSON = "manifest.json"
sTRACES_DIR = "traces"

# Exit codes of the command line interface
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
