"""Operator construction from configuration descriptors."""

from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from src.config.experiment import OperatorDescriptor
from src.exceptions import (
    EllipticityError,
    MalformedOperatorError,
    UnknownOperatorError,
)
from src.symmat import Sign, SymMat, eigenvalues

from .catalog import evaluate
from .coefficients import CoefficientField
from .spec import (
    GradientMode,
    Kernel,
    OperatorKind,
    OperatorParams,
    OperatorSpec,
    Optimize,
    SingularGradientMode,
)

logger = structlog.get_logger()

_CONFIGURABLE_KINDS = tuple(
    k.value for k in OperatorKind if k is not OperatorKind.CUSTOM
)
_DEGENERATE_TOLERANCE = 1e-12


def _matrices(raw: Sequence[Sequence[Sequence[float]]]) -> Tuple[SymMat, ...]:
    out = []
    for entry in raw:
        array = np.asarray(entry, dtype=float)
        if not np.allclose(array, array.T, rtol=0.0, atol=1e-12):
            raise MalformedOperatorError(f"Control matrix is not symmetric: {entry}")
        out.append(SymMat.from_array(array))
    return tuple(out)


def _band_of(matrices: Sequence[SymMat]) -> Tuple[float, float]:
    """Tightest (λ, Λ) containing every matrix."""
    lows, highs = [], []
    for matrix in matrices:
        values = eigenvalues(matrix).values
        lows.append(values[0])
        highs.append(values[-1])
    return min(lows), max(highs)


def _resolve_band(
    d: OperatorDescriptor, matrices: Sequence[SymMat]
) -> Tuple[float, float]:
    if d.lam is not None and d.big_lam is not None:
        return d.lam, d.big_lam
    if not matrices:
        raise MalformedOperatorError(f"{d.kind} operator needs lambda and Lambda")
    low, high = _band_of(matrices)
    return (d.lam if d.lam is not None else low), (
        d.big_lam if d.big_lam is not None else high
    )


def _dimension(d: OperatorDescriptor, matrices: Sequence[SymMat]) -> int:
    if matrices:
        n = matrices[0].n
        if d.dimension is not None and d.dimension != n:
            raise MalformedOperatorError(
                f"Descriptor dimension {d.dimension} disagrees with "
                f"matrices of size {n}"
            )
        return n
    if d.dimension is None:
        raise MalformedOperatorError(f"{d.kind} operator needs a dimension")
    return d.dimension


def _coefficients(d: OperatorDescriptor) -> CoefficientField:
    return CoefficientField.constants(
        b=d.b, c=d.c, f=d.f, drift=d.drift, amplitude=d.amplitude
    )


def _build(d: OperatorDescriptor) -> OperatorSpec:
    kind = OperatorKind(d.kind)
    coeffs = _coefficients(d)
    common: Dict[str, Any] = {
        "coeffs": coeffs,
        "gradient_mode": GradientMode(d.gradient_mode),
    }

    if kind in (OperatorKind.LINEAR, OperatorKind.BELLMAN):
        matrices = _matrices(d.matrices or [])
        if kind is OperatorKind.LINEAR and len(matrices) != 1:
            raise MalformedOperatorError("Linear operator needs exactly one matrix")
        if not matrices:
            raise MalformedOperatorError("Bellman operator needs a control family")
        lam, big_lam = _resolve_band(d, matrices)
        params = OperatorParams(matrices=matrices, optimize=Optimize(d.optimize))
        return OperatorSpec(
            kind, _dimension(d, matrices), lam, big_lam, params, **common
        )

    if kind is OperatorKind.ISAACS:
        grid = tuple(_matrices(row) for row in (d.isaacs_matrices or []))
        if not grid or not all(grid):
            raise MalformedOperatorError("Isaacs operator needs a non-empty grid")
        flat = [m for row in grid for m in row]
        lam, big_lam = _resolve_band(d, flat)
        params = OperatorParams(isaacs_matrices=grid)
        return OperatorSpec(kind, _dimension(d, flat), lam, big_lam, params, **common)

    if kind in (OperatorKind.PUCCI_PLUS, OperatorKind.PUCCI_MINUS):
        lam, big_lam = _resolve_band(d, [])
        return OperatorSpec(
            kind, d.dimension or 2, lam, big_lam, OperatorParams(), **common
        )

    if kind is OperatorKind.TRUNCATED_PUCCI:
        n = _dimension(d, [])
        if d.k is None or d.k < 1:
            raise MalformedOperatorError("Truncated Pucci operator needs k >= 1")
        if d.k >= n:
            raise MalformedOperatorError(
                f"Truncated Pucci operator needs k < n, got k={d.k}, n={n}"
            )
        lam, big_lam = _resolve_band(d, [])
        params = OperatorParams(k=d.k, sign=Sign(d.sign))
        return OperatorSpec(kind, n, lam, big_lam, params, **common)

    if kind is OperatorKind.NORMALIZED_P_LAPLACIAN:
        if d.p is None or d.p <= 1.0:
            raise MalformedOperatorError(f"p-Laplacian needs p > 1, got {d.p}")
        lam, big_lam = min(1.0, d.p - 1.0), max(1.0, d.p - 1.0)
        if (d.lam is not None and d.lam > lam) or (
            d.big_lam is not None and d.big_lam < big_lam
        ):
            raise EllipticityError(
                f"p-Laplacian with p={d.p} has band [{lam}, {big_lam}]"
            )
        params = OperatorParams(
            exponent=d.p,
            singular_gradient=SingularGradientMode(d.singular_gradient),
        )
        return OperatorSpec(
            kind,
            d.dimension or 2,
            d.lam if d.lam is not None else lam,
            d.big_lam if d.big_lam is not None else big_lam,
            params,
            **common,
        )

    # lagrangian_mcf
    if d.theta0 is None or d.theta0 <= 0:
        raise MalformedOperatorError("Lagrangian MCF operator needs theta0 > 0")
    bound = d.eigen_bound if d.eigen_bound is not None else 1.0
    if bound <= 0:
        raise MalformedOperatorError(f"eigen_bound must be positive, got {bound}")
    n = d.dimension or 2
    if n * np.arctan(bound) <= (n - 2) * np.pi / 2 + d.theta0:
        raise MalformedOperatorError(
            f"Branch Θ >= (n-2)π/2 + θ0 is empty on [-{bound}, {bound}]"
        )
    params = OperatorParams(theta0=d.theta0, eigen_bound=bound)
    return OperatorSpec(kind, n, 1.0 / (1.0 + bound * bound), 1.0, params, **common)


def check_degenerate_slot(spec: OperatorSpec, points: int = 5) -> None:
    """Require F(x, t, 0, 0, 0) - f(x, t) = 0 at sample points."""
    n = spec.dimension
    x = np.linspace(-1.0, 1.0, points)[:, None] * np.ones(n)
    p = np.zeros((points, n))
    if spec.direction_dependent:
        # M = 0 kills the principal part for every direction
        p[:, 0] = 1.0
    zeros_m = np.zeros((points, n, n))
    zeros_r = np.zeros(points)
    for t in (0.0, 0.5, 1.0):
        value = evaluate(spec, x, t, zeros_r, p, zeros_m, first_order=np.zeros(points))
        forcing = spec.coeffs.evaluate(x, t).f
        worst = float(np.max(np.abs(value - forcing)))
        if worst > _DEGENERATE_TOLERANCE:
            raise MalformedOperatorError(
                f"F(x,t,0,0,0) differs from the forcing by {worst:.3g}"
            )


def make_operator(
    descriptor: Union[OperatorDescriptor, Mapping[str, Any]]
) -> OperatorSpec:
    """Build and validate a catalog operator.

    Raises:
        UnknownOperatorError: kind is not in the catalog
        EllipticityError: control matrix outside the band
        MalformedOperatorError: missing or inconsistent parameters
    """
    if not isinstance(descriptor, OperatorDescriptor):
        raw = dict(descriptor)
        if raw.get("kind") not in _CONFIGURABLE_KINDS:
            raise UnknownOperatorError(
                f"Unknown operator kind {raw.get('kind')!r}; "
                f"expected one of {list(_CONFIGURABLE_KINDS)}"
            )
        descriptor = OperatorDescriptor.model_validate(raw)

    spec = _build(descriptor)
    check_degenerate_slot(spec)
    logger.debug(
        "Operator constructed",
        kind=spec.kind.value,
        dimension=spec.dimension,
        ellipticity=spec.ellipticity,
    )
    return spec


def custom_operator(
    kernel: Kernel,
    dimension: int,
    lam: float,
    big_lam: float,
    coeffs: Optional[CoefficientField] = None,
    name: str = "custom",
    validate: bool = True,
) -> OperatorSpec:
    """In-code operator G(p, M) = kernel(p, M); not reachable from config files."""
    spec = OperatorSpec(
        OperatorKind.CUSTOM,
        dimension,
        lam,
        big_lam,
        OperatorParams(kernel=kernel),
        coeffs=coeffs or CoefficientField(),
        gradient_mode=GradientMode.PLUS,
        name=name,
    )
    if validate:
        check_degenerate_slot(spec)
    return spec


def linear_operator(
    matrix: "SymMat | Sequence[Sequence[float]]",
    coeffs: Optional[CoefficientField] = None,
    band: Optional[Tuple[float, float]] = None,
) -> OperatorSpec:
    """Tr(A M) plus lower-order terms."""
    a = matrix if isinstance(matrix, SymMat) else SymMat.from_array(matrix)
    lam, big_lam = band or _band_of([a])
    return OperatorSpec(
        OperatorKind.LINEAR,
        a.n,
        lam,
        big_lam,
        OperatorParams(matrices=(a,)),
        coeffs=coeffs or CoefficientField(),
    )


def bellman_operator(
    matrices: List["SymMat | Sequence[Sequence[float]]"],
    band: Tuple[float, float],
    optimize: Optimize = Optimize.SUP,
    coeffs: Optional[CoefficientField] = None,
) -> OperatorSpec:
    family = tuple(
        m if isinstance(m, SymMat) else SymMat.from_array(m) for m in matrices
    )
    return OperatorSpec(
        OperatorKind.BELLMAN,
        family[0].n,
        band[0],
        band[1],
        OperatorParams(matrices=family, optimize=optimize),
        coeffs=coeffs or CoefficientField(),
    )
