"""smplab.

Numerical operator library and experiment harness for strong maximum and
minimum principles of fully nonlinear uniformly parabolic equations.

Features:
- Pucci extremal operators and a vectorized Jacobi eigenvalue kernel
- Catalog of Bellman, Isaacs, p-Laplacian and Lagrangian MCF operators
- Explicit barrier functions with machine-checked supersolution certificates
- Inclined cylinders and broken-line cylinder chains
- Explicit monotone finite-difference evolution with residual checks
- Config-driven experiments with JSON/CSV reports
"""

__version__ = "0.1.0"
__license__ = "MIT"
