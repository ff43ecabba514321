"""Sampling verifier for the uniform parabolicity structure condition.

For each sample it checks

    λ Tr N - b|p - q| + c (r - s)
        <= F(x, t, r, p, M + N) - F(x, t, s, q, M)
        <= Λ Tr N + b|p - q| + c (r - s)

with N = GᵀG positive semidefinite. Samples are drawn in fixed-size
chunks, each from its own child of ``SeedSequence(seed)``, so the report
depends only on the seed and the sample count.
"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
import structlog

from src.exceptions import MalformedOperatorError
from src.symmat import SymMat, sorted_eigenvalues
from src.utils.constants import (
    COMPARISON_RTOL,
    MCF_MAX_REJECTIONS,
    STRUCTURE_CHUNK_SIZE,
)

from .catalog import evaluate
from .spec import OperatorKind, OperatorSpec

logger = structlog.get_logger()

MAX_RECORDED_VIOLATIONS = 50


@dataclass(frozen=True)
class StructureSample:
    """One point of the quantified structure inequality."""

    x: Tuple[float, ...]
    t: float
    r: float
    s: float
    p: Tuple[float, ...]
    q: Tuple[float, ...]
    M: SymMat
    N: SymMat
    lower_margin: float = 0.0
    upper_margin: float = 0.0


@dataclass
class StructureReport:
    """Outcome of a structure-condition sweep."""

    samples_checked: int
    worst_lower_margin: float
    worst_upper_margin: float
    violations: List[StructureSample] = field(default_factory=list)
    violation_count: int = 0
    gradient_coupling: str = "independent"

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "samples_checked": self.samples_checked,
            "worst_lower_margin": self.worst_lower_margin,
            "worst_upper_margin": self.worst_upper_margin,
            "violation_count": self.violation_count,
            "gradient_coupling": self.gradient_coupling,
            "passed": self.passed,
        }


def _random_rotations(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((m, n, n)))
    signs = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    signs = np.where(signs == 0.0, 1.0, signs)
    return q * signs[..., None, :]


def _mcf_hessians(
    spec: OperatorSpec, rng: np.random.Generator, m: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Base matrices on the branch and PSD increments staying in [-E, E]."""
    n = spec.dimension
    bound = spec.params.eigen_bound or 1.0
    threshold = (n - 2) * np.pi / 2 + (spec.params.theta0 or 0.0)

    accepted = np.empty((0, n))
    for _ in range(MCF_MAX_REJECTIONS):
        candidates = rng.uniform(-bound, bound, (m, n))
        keep = np.sum(np.arctan(candidates), axis=-1) >= threshold
        accepted = np.concatenate([accepted, candidates[keep]])
        if len(accepted) >= m:
            break
    else:
        raise MalformedOperatorError(
            "Could not sample Hessians on the Lagrangian MCF branch"
        )
    values = accepted[:m]
    rot = _random_rotations(rng, m, n)
    base = rot @ (values[..., :, None] * np.swapaxes(rot, -1, -2))

    g = rng.uniform(-1.0, 1.0, (m, n, n))
    increment = np.swapaxes(g, -1, -2) @ g
    # ‖N‖₂ <= E - e_max(M) keeps every eigenvalue of M + N inside [-E, E]
    room = bound - values.max(axis=-1)
    spectral = np.linalg.norm(increment, ord=2, axis=(-2, -1))
    safe = np.where(spectral > 0.0, spectral, 1.0)
    scale = np.where(spectral > 0.0, room / safe, 0.0)
    return base, increment * scale[:, None, None]


def _draw_chunk(
    spec: OperatorSpec, rng: np.random.Generator, m: int, scale: float
) -> dict:
    n = spec.dimension
    x = rng.uniform(-1.0, 1.0, (m, n))
    t = rng.uniform(0.0, 1.0, m)
    r = rng.uniform(-scale, scale, m)
    s = rng.uniform(-scale, scale, m)
    p = rng.uniform(-scale, scale, (m, n))
    if spec.direction_dependent:
        small = np.linalg.norm(p, axis=-1) < 1e-6 * scale
        p[small, 0] = scale
        q = p.copy()
    else:
        q = rng.uniform(-scale, scale, (m, n))

    if spec.kind is OperatorKind.LAGRANGIAN_MCF:
        base, increment = _mcf_hessians(spec, rng, m)
    else:
        g1 = rng.uniform(-scale, scale, (m, n, n))
        base = 0.5 * (g1 + np.swapaxes(g1, -1, -2))
        g2 = rng.uniform(-scale, scale, (m, n, n))
        increment = np.swapaxes(g2, -1, -2) @ g2
    return {"x": x, "t": t, "r": r, "s": s, "p": p, "q": q, "M": base, "N": increment}


def _evaluate_at(
    spec: OperatorSpec,
    x: np.ndarray,
    t: np.ndarray,
    r: np.ndarray,
    p: np.ndarray,
    m: np.ndarray,
) -> np.ndarray:
    # coefficient fields take a scalar time, so group by distinct t
    out = np.empty(len(t))
    for value in np.unique(t):
        idx = np.nonzero(t == value)[0]
        out[idx] = evaluate(spec, x[idx], float(value), r[idx], p[idx], m[idx])
    return out


def check_structure_condition(
    spec: OperatorSpec,
    n_samples: int,
    scale: float = 1.0,
    seed: int = 0,
) -> StructureReport:
    """Sample the structure inequality; violations are reported, not raised.

    Args:
        spec: operator under test
        n_samples: number of samples (>= 1)
        scale: bound on the magnitude of sampled r, s, p, q, M and G
        seed: sampler seed

    Returns:
        StructureReport with worst margins and recorded violations
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")

    lam, big_lam = spec.effective_ellipticity
    drift_norm = spec.coeffs.drift_norm
    chunks = -(-n_samples // STRUCTURE_CHUNK_SIZE)
    children = np.random.SeedSequence(seed).spawn(chunks)

    worst_lower = np.inf
    worst_upper = np.inf
    violations: List[StructureSample] = []
    violation_count = 0

    for index, child in enumerate(children):
        m = min(STRUCTURE_CHUNK_SIZE, n_samples - index * STRUCTURE_CHUNK_SIZE)
        rng = np.random.default_rng(child)
        d = _draw_chunk(spec, rng, m, scale)

        upper_value = _evaluate_at(
            spec, d["x"], d["t"], d["r"], d["p"], d["M"] + d["N"]
        )
        lower_value = _evaluate_at(spec, d["x"], d["t"], d["s"], d["q"], d["M"])
        diff = upper_value - lower_value

        b = np.empty(m)
        c = np.empty(m)
        for value in np.unique(d["t"]):
            idx = np.nonzero(d["t"] == value)[0]
            coeffs = spec.coeffs.evaluate(d["x"][idx], float(value))
            b[idx] = coeffs.b
            c[idx] = coeffs.c

        trace_n = np.trace(d["N"], axis1=-2, axis2=-1)
        gap = np.linalg.norm(d["p"] - d["q"], axis=-1)
        first_order = (b + drift_norm) * gap
        zeroth = c * (d["r"] - d["s"])
        lower_bound = lam * trace_n - first_order + zeroth
        upper_bound = big_lam * trace_n + first_order + zeroth

        lower_margin = diff - lower_bound
        upper_margin = upper_bound - diff
        tol_lower = COMPARISON_RTOL * (1.0 + np.abs(diff) + np.abs(lower_bound))
        tol_upper = COMPARISON_RTOL * (1.0 + np.abs(diff) + np.abs(upper_bound))
        bad = (lower_margin < -tol_lower) | (upper_margin < -tol_upper)

        worst_lower = min(worst_lower, float(lower_margin.min()))
        worst_upper = min(worst_upper, float(upper_margin.min()))
        violation_count += int(bad.sum())

        for i in np.nonzero(bad)[0]:
            if len(violations) >= MAX_RECORDED_VIOLATIONS:
                break
            violations.append(
                StructureSample(
                    x=tuple(d["x"][i]),
                    t=float(d["t"][i]),
                    r=float(d["r"][i]),
                    s=float(d["s"][i]),
                    p=tuple(d["p"][i]),
                    q=tuple(d["q"][i]),
                    M=SymMat.from_array(d["M"][i]),
                    N=SymMat.from_array(d["N"][i]),
                    lower_margin=float(lower_margin[i]),
                    upper_margin=float(upper_margin[i]),
                )
            )

    report = StructureReport(
        samples_checked=n_samples,
        worst_lower_margin=worst_lower,
        worst_upper_margin=worst_upper,
        violations=violations,
        violation_count=violation_count,
        gradient_coupling="shared" if spec.direction_dependent else "independent",
    )
    if violation_count:
        logger.warning(
            "Structure condition violated",
            operator=spec.label,
            violations=violation_count,
            samples=n_samples,
        )
    else:
        logger.debug(
            "Structure condition holds", operator=spec.label, samples=n_samples
        )
    return report


def pucci_sandwich_gap(
    spec: OperatorSpec,
    x: np.ndarray,
    t: float,
    r: np.ndarray,
    p: np.ndarray,
    m: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    """Slack in the Pucci bounds of F(x,t,r,p,M) - F(x,t,0,0,0), r >= 0.

    upper = M⁺(M) + (b + |drift|)|p| + c r - [F(r,p,M) - F(0,0,0)]
    lower = [F(r,p,M) - F(0,0,0)] - M⁻(M) + (b + |drift|)|p| - c r

    Direction-dependent operators use F(x,t,0,p,0) as the base point.
    """
    lam, big_lam = spec.effective_ellipticity
    base_p = p if spec.direction_dependent else np.zeros_like(p)
    base = evaluate(spec, x, t, np.zeros_like(r), base_p, np.zeros_like(m))
    value = evaluate(spec, x, t, r, p, m) - base
    coeffs = spec.coeffs.evaluate(x, t)
    values = sorted_eigenvalues(m)
    positive = np.sum(np.clip(values, 0.0, None), axis=-1)
    negative = np.sum(np.clip(values, None, 0.0), axis=-1)
    first = (coeffs.b + spec.coeffs.drift_norm) * np.linalg.norm(p, axis=-1)
    upper = big_lam * positive + lam * negative + first + coeffs.c * r - value
    lower = value - (lam * positive + big_lam * negative) + first - coeffs.c * r
    return upper, lower
