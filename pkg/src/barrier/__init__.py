"""Explicit barrier and its strict-supersolution certificate."""

from .certificate import (
    BarrierCertificate,
    beta_threshold,
    certify_strict_supersolution,
    compute_K,
    psi,
    psi_minimum,
    select_beta,
    structure_constant,
)
from .function import (
    BarrierParams,
    BarrierValue,
    barrier_arrays,
    barrier_eval,
    phi_eigenvalues,
    phi_parts,
    pucci_barrier_hessian,
    pucci_phi,
)

__all__ = [
    "BarrierParams",
    "BarrierValue",
    "BarrierCertificate",
    "barrier_eval",
    "barrier_arrays",
    "phi_parts",
    "phi_eigenvalues",
    "pucci_phi",
    "pucci_barrier_hessian",
    "structure_constant",
    "compute_K",
    "beta_threshold",
    "select_beta",
    "psi",
    "psi_minimum",
    "certify_strict_supersolution",
]
