"""Experiment configuration records.

Experiment files are JSON or YAML documents validated by these models.
Unknown keys are rejected at every level.
"""

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.utils.constants import DEFAULT_BARRIER_RADIUS, EXPERIMENT_NAMES

OperatorKindName = Literal[
    "linear",
    "bellman",
    "isaacs",
    "pucci_plus",
    "pucci_minus",
    "truncated_pucci",
    "normalized_p_laplacian",
    "lagrangian_mcf",
]

ShapeName = Literal[
    "bump", "cosine_bump", "quadratic", "constant", "smoothed_indicator"
]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class OperatorDescriptor(_Strict):
    """Catalog operator with constant lower-order coefficients."""

    kind: OperatorKindName = Field(..., description="Catalog kind")
    dimension: Optional[int] = Field(None, ge=1, description="Space dimension n")
    lam: Optional[float] = Field(None, alias="lambda", description="Ellipticity λ")
    big_lam: Optional[float] = Field(
        None, alias="Lambda", description="Ellipticity Λ"
    )
    matrices: Optional[List[List[List[float]]]] = Field(
        None, description="Control matrices for linear/bellman kinds"
    )
    isaacs_matrices: Optional[List[List[List[List[float]]]]] = Field(
        None, description="Isaacs grid, outer index sup, inner index inf"
    )
    optimize: Literal["sup", "inf"] = "sup"
    p: Optional[float] = Field(None, description="p-Laplacian exponent")
    k: Optional[int] = Field(None, description="Truncation order")
    sign: Literal["plus", "minus"] = "minus"
    theta0: Optional[float] = Field(None, description="MCF branch offset θ0")
    eigen_bound: Optional[float] = Field(
        None, description="MCF compact eigenvalue interval [-E, E]"
    )
    singular_gradient: Literal[
        "reject", "upper_envelope", "lower_envelope", "symmetric"
    ] = "reject"
    gradient_mode: Literal["none", "plus", "minus"] = "plus"
    b: float = Field(0.0, ge=0.0, description="First-order coefficient b >= 0")
    c: float = Field(0.0, le=0.0, description="Zeroth-order coefficient c <= 0")
    f: float = Field(0.0, description="Forcing")
    drift: Optional[List[float]] = Field(None, description="Constant drift vector")
    amplitude: float = Field(1.0, gt=0.0, description="Principal-part amplitude")

    @model_validator(mode="after")
    def validate_band(self) -> "OperatorDescriptor":
        """λ <= Λ when both are given."""
        if self.lam is not None and self.big_lam is not None:
            if self.big_lam < self.lam:
                raise ValueError(f"Lambda={self.big_lam} < lambda={self.lam}")
        return self


class GeometryConfig(_Strict):
    """Cylinder and broken-line data."""

    center: Optional[List[float]] = Field(None, description="Axis base point x0")
    radius: float = Field(1.0, gt=0.0)
    t_start: float = 0.0
    t_end: float = 0.2
    eta: Optional[List[float]] = Field(None, description="Axis tilt velocity")
    broken_line: Optional[List[List[float]]] = Field(
        None, description="Vertices as [x..., t] with increasing t"
    )
    chain_radius: Optional[float] = Field(None, gt=0.0)

    @model_validator(mode="after")
    def validate_times(self) -> "GeometryConfig":
        if self.t_end <= self.t_start:
            raise ValueError(
                f"t_end={self.t_end} must exceed t_start={self.t_start}"
            )
        return self


class GridConfig(_Strict):
    """Lattice resolution and time stepping."""

    spacing: float = Field(1.0 / 32.0, gt=0.0, description="Mesh width h")
    dt: Optional[float] = Field(None, gt=0.0, description="Time step override")
    cfl_safety: Optional[float] = Field(None, gt=0.0, le=1.0)
    snapshots: int = Field(20, ge=1, description="Number of recorded time slices")
    padding: int = Field(2, ge=1, description="Nodes outside the domain per side")


class ShapeDescriptor(_Strict):
    """Named data shape."""

    shape: ShapeName = "constant"
    amplitude: float = 1.0
    center: Optional[List[float]] = None
    radius: float = Field(1.0, gt=0.0)
    coefficients: Optional[List[float]] = None
    offset: float = 0.0
    width: float = Field(0.1, gt=0.0, description="Indicator transition width")


class BarrierConfig(_Strict):
    """Barrier certificate settings."""

    r0: float = Field(DEFAULT_BARRIER_RADIUS, gt=0.0)
    sharp: bool = True
    beta_factor: float = Field(2.0, gt=0.0)
    window: float = Field(
        0.05, gt=0.0, description="Barrier cylinder duration ending at t_end"
    )
    certificate_grid: Optional[int] = Field(None, ge=4)


class ExperimentConfig(_Strict):
    """One experiment run."""

    experiment: str
    operator: OperatorDescriptor
    geometry: GeometryConfig = Field(default_factory=GeometryConfig)
    grid: GridConfig = Field(default_factory=GridConfig)
    initial: ShapeDescriptor = Field(
        default_factory=lambda: ShapeDescriptor(shape="bump")
    )
    boundary: ShapeDescriptor = Field(
        default_factory=lambda: ShapeDescriptor(shape="constant", amplitude=0.0)
    )
    secondary: Optional[ShapeDescriptor] = Field(
        None, description="Second data set (lower data for comparisons)"
    )
    barrier: BarrierConfig = Field(default_factory=BarrierConfig)
    tolerances: Dict[str, float] = Field(default_factory=dict)
    strictness_start: Optional[float] = Field(None, ge=0.0)
    t_pos: Optional[float] = Field(None, ge=0.0)
    seed: Optional[int] = Field(None, description="Defaults to the settings seed")
    output: Optional[str] = None

    @field_validator("experiment")
    @classmethod
    def validate_experiment(cls, v: str) -> str:
        if v not in EXPERIMENT_NAMES:
            raise ValueError(
                f"Unknown experiment {v!r}; expected one of {list(EXPERIMENT_NAMES)}"
            )
        return v

    @field_validator("tolerances")
    @classmethod
    def validate_tolerances(cls, v: Dict[str, float]) -> Dict[str, float]:
        bad = {key: value for key, value in v.items() if not value > 0}
        if bad:
            raise ValueError(f"Tolerances must be positive: {bad}")
        return v

    def tolerance(self, key: str, default: float) -> float:
        return self.tolerances.get(key, default)
