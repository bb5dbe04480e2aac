"""
Configuration settings for the near-unitary toolkit
Natural units throughout: hbar = m = 1 (and omega = 1 for the harmonic trap)
"""

import os

from dotenv import load_dotenv

load_dotenv()

# Physical constants (natural units)
HBAR = 1.0
MASS = 1.0

# Orderings / well operators
ORDERING_CEILING = 8  # N! = 40320 wells
DENSE_CEILING = 5  # dense N! x N! matrices and eigensolves up to 120 wells

# Degeneracy clustering
CLUSTER_RELATIVE_TOL = 1e-9  # scaled by (max|eigenvalue| + 1)
CLUSTER_AMBIGUITY_FACTOR = 10.0
CHARACTER_RESIDUAL_TOL = 1e-8
SYMMETRY_TOL = 1e-12
PALINDROME_RTOL = 1e-9  # rates computed by quadrature are palindromic only to this level
PARITY_RESIDUAL_TOL = 1e-6

# Trap bases
WAVEFUNCTION_CUTOFF = 1e-10  # |phi_n| below this is treated as zero for truncation
FD_DERIVATIVE_STEP = 1e-4
POINTS_PER_HALF_WAVELENGTH = 10

# Quadrature
QUADRATURE_ORDER = 16  # Gauss-Legendre nodes per panel
QUADRATURE_START_PANELS = 4
QUADRATURE_MAX_LEVEL = 4  # panel doublings
QUADRATURE_RTOL = 1e-9
QUADRATURE_ATOL = 1e-14
QUADRATURE_CHUNK = 200_000  # integrand evaluations per batch
QUADRATURE_MAX_POINTS = 20_000_000  # per refinement level
GRID_QUADRATURE_RTOL = 1e-6  # spline-interpolated orbitals are only piecewise smooth

# Monte Carlo cross-check
MONTE_CARLO_SAMPLES = 10_000_000
MONTE_CARLO_CHUNK = 1_000_000
DEFAULT_SEED = 0

# Exact diagonalization oracle
ED_DIMENSION_GUARD = 10_000
ED_DEFAULT_CUTOFF = 12
ED_CUTOFF_MARGIN = 4  # M >= max(quanta) + margin
ED_EXTRA_LEVELS = 10  # lowest 2*N! + extra eigenvalues are reported
MULTIPLET_ISOLATION_FRACTION = 0.25
FINGERPRINT_TOLERANCE = {2: 0.10, 3: 0.15}
DEFAULT_G_SAMPLES = [15.0, 20.0, 30.0]

# Output
JSON_INDENT = 2
OUTPUT_DIR = os.getenv("OUTPUT_DIR", "output")
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
DEFAULT_THREADS = 1
