"""Uniform lattices with interior/boundary/outside node masks.

A node is interior when it lies inside the domain and its whole 3ⁿ
stencil exists on the lattice; boundary nodes are the stencil
neighbours of interior nodes that are not interior themselves. The
domain may move with time (an inclined ball), in which case masks are
recomputed per time level.
"""

import itertools
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from src.exceptions import GridError
from src.geometry import Cylinder, InclinedCylinder
from src.utils.constants import SUPPORTED_GRID_DIMENSIONS

DomainPredicate = Callable[[np.ndarray, float], np.ndarray]


class NodeKind(IntEnum):
    OUTSIDE = 0
    BOUNDARY = 1
    INTERIOR = 2


def _ball(center: Sequence[float], radius: float) -> DomainPredicate:
    c = np.asarray(center, dtype=float)

    def inside(points: np.ndarray, t: float) -> np.ndarray:
        return np.sum((points - c) ** 2, axis=-1) < radius * radius

    return inside


def _moving_ball(ic: InclinedCylinder) -> DomainPredicate:
    def inside(points: np.ndarray, t: float) -> np.ndarray:
        c = ic.axis(t)
        return np.sum((points - c) ** 2, axis=-1) < ic.base.R**2

    return inside


@dataclass
class Grid:
    """Axis-aligned lattice with spacing h over [lower, upper]."""

    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    h: float
    dt: Optional[float] = None
    domain: Optional[DomainPredicate] = None
    moving: bool = False
    _mask_cache: Dict[float, np.ndarray] = field(
        default_factory=dict, init=False, repr=False
    )

    def __post_init__(self) -> None:
        if len(self.lower) != len(self.upper):
            raise GridError("Box bounds differ in dimension")
        if self.n not in SUPPORTED_GRID_DIMENSIONS:
            raise GridError(
                f"Grids support dimensions {SUPPORTED_GRID_DIMENSIONS}, got {self.n}"
            )
        if not self.h > 0:
            raise GridError(f"Spacing must be positive, got {self.h}")
        if self.dt is not None and not self.dt > 0:
            raise GridError(f"Time step must be positive, got {self.dt}")
        for lo, hi in zip(self.lower, self.upper):
            if hi <= lo:
                raise GridError(f"Empty box side [{lo}, {hi}]")
        if min(self.shape) < 3:
            raise GridError(f"Grid {self.shape} is too coarse for a 3-point stencil")

    @classmethod
    def box(
        cls,
        lower: Sequence[float],
        upper: Sequence[float],
        h: float,
        dt: Optional[float] = None,
    ) -> "Grid":
        """Whole box as domain; the outermost layer is boundary."""
        return cls(tuple(map(float, lower)), tuple(map(float, upper)), h, dt)

    @classmethod
    def ball(
        cls,
        center: Sequence[float],
        radius: float,
        h: float,
        dt: Optional[float] = None,
        padding: int = 2,
    ) -> "Grid":
        """Box around the ball |x - center| < radius, padded by whole cells."""
        c = np.asarray(center, dtype=float)
        reach = radius + padding * h
        return cls(
            tuple(c - reach),
            tuple(c + reach),
            h,
            dt,
            domain=_ball(center, radius),
        )

    @classmethod
    def for_cylinder(
        cls, cylinder: Cylinder, h: float, dt: Optional[float] = None, padding: int = 2
    ) -> "Grid":
        return cls.ball(cylinder.x0, cylinder.R, h, dt, padding)

    @classmethod
    def inclined_ball(
        cls,
        ic: InclinedCylinder,
        h: float,
        dt: Optional[float] = None,
        padding: int = 2,
    ) -> "Grid":
        """Fixed lattice covering the ball as its center moves along the axis."""
        start = ic.axis(ic.base.t1)
        end = ic.axis(ic.base.t2)
        reach = ic.base.R + padding * h
        lower = np.minimum(start, end) - reach
        upper = np.maximum(start, end) + reach
        return cls(
            tuple(lower), tuple(upper), h, dt, domain=_moving_ball(ic), moving=True
        )

    @property
    def n(self) -> int:
        return len(self.lower)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(
            int(round((hi - lo) / self.h)) + 1 for lo, hi in zip(self.lower, self.upper)
        )

    @property
    def axes(self) -> Tuple[np.ndarray, ...]:
        return tuple(
            lo + self.h * np.arange(count) for lo, count in zip(self.lower, self.shape)
        )

    @property
    def points(self) -> np.ndarray:
        """Node coordinates shaped shape + (n,)."""
        return np.stack(np.meshgrid(*self.axes, indexing="ij"), axis=-1)

    def with_dt(self, dt: float) -> "Grid":
        return Grid(self.lower, self.upper, self.h, dt, self.domain, self.moving)

    def mask_at(self, t: float = 0.0) -> np.ndarray:
        """NodeKind per node at time t."""
        key = float(t) if self.moving else 0.0
        cached = self._mask_cache.get(key)
        if cached is not None:
            return cached

        shape = self.shape
        if self.domain is None:
            inside = np.ones(shape, dtype=bool)
        else:
            inside = np.asarray(self.domain(self.points, t), dtype=bool)

        core = np.zeros(shape, dtype=bool)
        core[tuple(slice(1, -1) for _ in shape)] = True
        interior = inside & core
        near = _dilate(interior)

        mask = np.full(shape, NodeKind.OUTSIDE, dtype=np.int8)
        mask[near] = NodeKind.BOUNDARY
        mask[interior] = NodeKind.INTERIOR
        if not interior.any():
            raise GridError(f"No interior nodes at t={t}; refine the grid")
        if self.moving and len(self._mask_cache) > 4096:
            self._mask_cache.clear()
        self._mask_cache[key] = mask
        return mask

    def interior(self, t: float = 0.0) -> np.ndarray:
        return self.mask_at(t) == NodeKind.INTERIOR

    def active(self, t: float = 0.0) -> np.ndarray:
        """Interior and boundary nodes."""
        return self.mask_at(t) != NodeKind.OUTSIDE

    def evaluate(
        self, fn: Callable[[np.ndarray, float], np.ndarray], t: float
    ) -> np.ndarray:
        """Sample a space-time function on every node."""
        values = np.asarray(fn(self.points, t), dtype=float)
        return np.broadcast_to(values, self.shape).copy()

    def nearest_index(self, x: Sequence[float]) -> Tuple[int, ...]:
        idx = np.rint((np.asarray(x, dtype=float) - self.lower) / self.h).astype(int)
        idx = np.clip(idx, 0, np.asarray(self.shape) - 1)
        return tuple(int(i) for i in idx)

    def node(self, index: Sequence[int]) -> np.ndarray:
        return np.asarray(self.lower) + self.h * np.asarray(index, dtype=float)

    def interpolate(self, values: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Multilinear interpolation of nodal values at points shaped (..., n)."""
        x = np.asarray(x, dtype=float)
        rel = (x - np.asarray(self.lower)) / self.h
        upper = np.asarray(self.shape) - 2
        base = np.clip(np.floor(rel).astype(int), 0, upper)
        frac = np.clip(rel - base, 0.0, 1.0)
        result = np.zeros(x.shape[:-1])
        for corner in itertools.product((0, 1), repeat=self.n):
            offset = np.asarray(corner)
            weight = np.prod(np.where(offset == 1, frac, 1.0 - frac), axis=-1)
            idx = tuple((base + offset)[..., k] for k in range(self.n))
            result = result + weight * values[idx]
        return result


def _dilate(mask: np.ndarray) -> np.ndarray:
    """Union of all 3ⁿ-stencil shifts of mask."""
    n = mask.ndim
    padded = np.pad(mask, 1)
    out = np.zeros_like(mask)
    for offset in itertools.product((-1, 0, 1), repeat=n):
        window = tuple(slice(1 + o, 1 + o + s) for o, s in zip(offset, mask.shape))
        out |= padded[window]
    return out


@dataclass(frozen=True)
class GridFunction:
    """Nodal values at one time level."""

    values: np.ndarray
    t: float = 0.0

    def __post_init__(self) -> None:
        if not np.all(np.isfinite(self.values)):
            raise GridError("Grid function values must be finite")

    @classmethod
    def sample(
        cls, grid: Grid, fn: Callable[[np.ndarray, float], np.ndarray], t: float = 0.0
    ) -> "GridFunction":
        return cls(values=grid.evaluate(fn, t), t=t)
