"""Barrier constants and the strict-supersolution certificate.

With s = r0² - ρ² the residual of the barrier is bounded by
-α e^{-β(t-t')} Ψ(s), where

    Ψ(s) = β s² - (8λ + K) s + 8λ r0².

Ψ(0) = 8λ r0² > 0; Ψ is positive on [0, r0²] once β exceeds
β* = (8λ + K)² / (32 λ r0²).
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np
import structlog

from src.exceptions import InvalidBarrierParamsError
from src.symmat import Sign, pucci_from_eigenvalues, sorted_eigenvalues
from src.utils.constants import (
    BETA_SAFETY_FACTOR,
    COMPARISON_RTOL,
    DEFAULT_CERTIFICATE_GRID,
    DEFAULT_PSI_SWEEP_SAMPLES,
)

from .function import BarrierParams, phi_parts, pucci_phi

logger = structlog.get_logger()

PUCCI_AGREEMENT_TOLERANCE = 1e-9


def structure_constant(
    lam: float, big_lam: float, n: int, sharp: bool = False
) -> float:
    """c_{n,λ,Λ} = 4λ(n-1) + 4Λ, or the sharp bound 4nΛ.

    The sharp value bounds -M⁻(D²φ) - 8λρ² by 4nΛ(r0² - ρ²) everywhere in
    the ball; the unsharpened one is smaller when λ < Λ and relies on the
    certificate to confirm the residual bound.
    """
    if sharp:
        return 4.0 * n * big_lam
    return 4.0 * lam * (n - 1) + 4.0 * big_lam


def compute_K(
    lam: float,
    big_lam: float,
    n: int,
    b_sup: float,
    c_abs_sup: float,
    r0: float,
    sharp: bool = False,
) -> float:
    """K = c_{n,λ,Λ} + 4 b_sup r0 + c_abs_sup r0²."""
    if lam <= 0 or big_lam < lam:
        raise InvalidBarrierParamsError(f"Need 0 < λ <= Λ, got ({lam}, {big_lam})")
    if b_sup < 0 or c_abs_sup < 0:
        raise InvalidBarrierParamsError("Coefficient bounds must be nonnegative")
    if not 0.0 < r0 < 1.0:
        raise InvalidBarrierParamsError(f"r0 must lie in (0, 1), got {r0}")
    return (
        structure_constant(lam, big_lam, n, sharp)
        + 4.0 * b_sup * r0
        + c_abs_sup * r0 * r0
    )


def beta_threshold(lam: float, K: float, r0: float) -> float:
    """β* = (8λ + K)² / (32 λ r0²)."""
    return (8.0 * lam + K) ** 2 / (32.0 * lam * r0 * r0)


def select_beta(
    lam: float, K: float, r0: float, factor: float = BETA_SAFETY_FACTOR
) -> Tuple[float, float]:
    """(δ, β) with β = factor·β* and δ = 8λ r0² / (2(8λ + K)).

    For s <= δ, Ψ(s) >= 8λ r0² - (8λ + K) s >= 4λ r0² > 0 whatever β > 0.
    """
    if lam <= 0 or K < 0:
        raise InvalidBarrierParamsError(f"Need λ > 0 and K >= 0, got ({lam}, {K})")
    if not 0.0 < r0 < 1.0:
        raise InvalidBarrierParamsError(f"r0 must lie in (0, 1), got {r0}")
    delta = 8.0 * lam * r0 * r0 / (2.0 * (8.0 * lam + K))
    return delta, factor * beta_threshold(lam, K, r0)


def psi(
    s: "float | np.ndarray", beta: float, lam: float, K: float, r0: float
) -> "float | np.ndarray":
    return beta * s * s - (8.0 * lam + K) * s + 8.0 * lam * r0 * r0


def psi_minimum(
    beta: float,
    lam: float,
    K: float,
    r0: float,
    sweep_samples: int = DEFAULT_PSI_SWEEP_SAMPLES,
) -> float:
    """min Ψ over [0, r0²]: closed form at the vertex or endpoints, plus a sweep."""
    b = 8.0 * lam + K
    upper = r0 * r0
    candidates = [psi(0.0, beta, lam, K, r0), psi(upper, beta, lam, K, r0)]
    vertex = b / (2.0 * beta)
    if 0.0 <= vertex <= upper:
        candidates.append(8.0 * lam * r0 * r0 - b * b / (4.0 * beta))
    if sweep_samples > 1:
        s = np.linspace(0.0, upper, sweep_samples)
        candidates.append(float(np.min(psi(s, beta, lam, K, r0))))
    return float(min(candidates))


@dataclass
class BarrierCertificate:
    """Constants and outcome of a certificate run."""

    K: float
    c_nlL: float
    delta: float
    beta: float
    beta_threshold: float
    margin: float
    samples: int
    passed: bool
    worst_scaled_residual: float = 0.0
    pucci_agreement: float = 0.0
    violation: Optional[Dict[str, Any]] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "K": self.K,
            "c_nlL": self.c_nlL,
            "delta": self.delta,
            "beta": self.beta,
            "beta_threshold": self.beta_threshold,
            "margin": self.margin,
            "samples": self.samples,
            "passed": self.passed,
            "worst_scaled_residual": self.worst_scaled_residual,
            "pucci_agreement": self.pucci_agreement,
            "violation": self.violation,
        }
        out.update(self.extra)
        return out


def _ball_points(n: int, center: np.ndarray, r0: float, grid: int) -> np.ndarray:
    """Cube lattice filtered to the closed ball plus points on the sphere."""
    axis = np.linspace(-r0, r0, grid)
    mesh = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1)
    mesh = mesh.reshape(-1, n)
    inside = mesh[np.sum(mesh * mesh, axis=-1) <= r0 * r0]

    if n == 1:
        sphere = np.array([[-r0], [r0]])
    elif n == 2:
        angles = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
        sphere = r0 * np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    else:
        directions = np.random.default_rng(0).standard_normal((grid * n, n))
        norms = np.linalg.norm(directions, axis=-1, keepdims=True)
        sphere = r0 * directions / norms
    return center + np.concatenate([inside, sphere])


def certify_strict_supersolution(
    params: BarrierParams,
    lam: float,
    big_lam: float,
    b_sup: float,
    c_abs_sup: float,
    grid: int = DEFAULT_CERTIFICATE_GRID,
    t_end: Optional[float] = None,
    sharp: bool = False,
    sweep_samples: int = DEFAULT_PSI_SWEEP_SAMPLES,
) -> BarrierCertificate:
    """Check M⁺(D²v) + b_sup|Dv| + c v - ∂t v <= -α e^{-β(t-t')} min Ψ.

    Samples the closed ball ρ <= r0 times ``grid`` times in [t', t_end],
    with c in {0, -c_abs_sup}. The Pucci value is computed both from the
    two-regime closed form and from eigenvalues; a disagreement above 1e-9
    fails the certificate.
    """
    n = params.n
    K = compute_K(lam, big_lam, n, b_sup, c_abs_sup, params.r0, sharp=sharp)
    delta, _ = select_beta(lam, K, params.r0)
    threshold = beta_threshold(lam, K, params.r0)
    margin = psi_minimum(params.beta, lam, K, params.r0, sweep_samples)

    points = _ball_points(n, params.center, params.r0, grid)
    phi, grad_phi, hess_phi, _ = phi_parts(params, points)
    rho = np.linalg.norm(points - params.center, axis=-1)

    # D²v = -E D²φ, so M⁺(D²v) = -E M⁻(D²φ)
    closed = pucci_phi(Sign.MINUS, lam, big_lam, n, params.r0, rho)
    spectral = pucci_from_eigenvalues(
        Sign.MINUS, lam, big_lam, sorted_eigenvalues(hess_phi)
    )
    agreement = np.abs(closed - spectral) / (1.0 + np.abs(closed))
    pucci_agreement = float(agreement.max())

    end = params.t_prime + 1.0 if t_end is None else t_end
    times = np.linspace(params.t_prime, end, grid)
    e = np.asarray(params.decay(times))[:, None]

    grad_norm = np.linalg.norm(grad_phi, axis=-1)[None, :]
    value = params.cap - e * phi[None, :]
    base = e * (-closed[None, :] + b_sup * grad_norm - params.beta * phi[None, :])
    # e underflows to 0 for large β(t - t'); those rows carry no information
    safe_e = np.where(e > 0.0, e, np.inf)

    bound = -e * margin
    worst_scaled = -np.inf
    violation: Optional[Dict[str, Any]] = None
    samples = 0
    for c in sorted({0.0, -c_abs_sup}):
        residual = base + c * value
        samples += residual.size
        slack = bound - residual + COMPARISON_RTOL * (1.0 + np.abs(residual))
        worst_scaled = max(worst_scaled, float((residual / safe_e).max()))
        if violation is None and np.any(slack < 0):
            ti, xi = np.unravel_index(int(np.argmin(slack)), slack.shape)
            violation = {
                "x": [float(v) for v in points[xi]],
                "t": float(times[ti]),
                "c": c,
                "residual": float(residual[ti, xi]),
                "bound": float(bound[ti, 0]),
            }

    if pucci_agreement > PUCCI_AGREEMENT_TOLERANCE and violation is None:
        xi = int(np.argmax(agreement))
        violation = {
            "x": [float(v) for v in points[xi]],
            "reason": "closed-form and eigenvalue Pucci values disagree",
            "difference": pucci_agreement,
        }

    passed = margin > 0 and violation is None
    certificate = BarrierCertificate(
        K=K,
        c_nlL=structure_constant(lam, big_lam, n, sharp),
        delta=delta,
        beta=params.beta,
        beta_threshold=threshold,
        margin=margin,
        samples=samples,
        passed=passed,
        worst_scaled_residual=worst_scaled,
        pucci_agreement=pucci_agreement,
        violation=violation,
    )
    logger.info(
        "Barrier certificate evaluated",
        K=K,
        beta=params.beta,
        margin=margin,
        passed=passed,
        samples=samples,
    )
    return certificate
