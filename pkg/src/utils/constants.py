"""Application-wide constants."""

# Version info
APP_NAME = "smplab"
APP_DESCRIPTION = "Strong maximum principle lab for fully nonlinear parabolic equations"

# Symmetric-matrix kernel
DEFAULT_JACOBI_TOLERANCE = 1e-12
DEFAULT_JACOBI_MAX_SWEEPS = 50
ZERO_EIGENVALUE_RTOL = 1e-12

# Inequality slack absorbing eigenvalue-solver noise: tol * (1 + |lhs| + |rhs|)
COMPARISON_RTOL = 1e-9

# Operators
DEFAULT_STRUCTURE_SAMPLES = 10_000
STRUCTURE_CHUNK_SIZE = 1024
MCF_MAX_REJECTIONS = 200

# Barrier certificate
DEFAULT_CERTIFICATE_GRID = 64
DEFAULT_PSI_SWEEP_SAMPLES = 100_000
BETA_SAFETY_FACTOR = 2.0

# Geometry
JUNCTION_TOLERANCE = 1e-12
MAX_RADIUS_SHRINKS = 20

# Solver
DEFAULT_CFL_SAFETY = 0.9
ORDERING_TOLERANCE = 1e-12
SUPPORTED_GRID_DIMENSIONS = (1, 2)

# Lab
DEFAULT_STRICTNESS_START = 0.01
DEFAULT_T_POS = 0.05
POSITIVITY_THRESHOLD = 1e-12
EXPERIMENT_NAMES = (
    "axis_strictness",
    "inclined",
    "broken_line",
    "strong_comparison",
    "positivity",
    "truncated_counterexample",
    "elliptic_reduction",
    "shifted_maximum",
)
DEFAULT_BARRIER_RADIUS = 0.4
DEFAULT_SCHEME_ATOL = 0.02
# v >= u tolerance in the barrier ball, in units of h²
BARRIER_DOMINANCE_FACTOR = 1e-4
DEFAULT_OUTPUT_DIR = "results"
REPORT_FILENAME = "report.json"

# Logging
LOG_FORMAT = "%(message)s"
