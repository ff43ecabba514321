"""Broken lines and the inclined-cylinder chains covering them."""

from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from src.exceptions import ContainmentError, GeometryError, ZeroDurationSegmentError
from src.utils.constants import JUNCTION_TOLERANCE, MAX_RADIUS_SHRINKS

from .cylinders import InclinedCylinder

logger = structlog.get_logger()

Vertex = Tuple[Tuple[float, ...], float]


@dataclass(frozen=True)
class BrokenLine:
    """Space-time polyline with strictly increasing times.

    The last vertex is the upper end-point.
    """

    vertices: Tuple[Vertex, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) < 2:
            raise GeometryError("A broken line needs at least two vertices")
        n = len(self.vertices[0][0])
        for (x_a, t_a), (x_b, t_b) in zip(self.vertices, self.vertices[1:]):
            if len(x_a) != n or len(x_b) != n:
                raise GeometryError("Broken line vertices differ in dimension")
            if t_b == t_a:
                raise ZeroDurationSegmentError(
                    f"Segment at t={t_a} has zero duration"
                )
            if t_b < t_a:
                raise GeometryError(
                    f"Broken line times must increase, got {t_a} then {t_b}"
                )

    @classmethod
    def from_points(cls, points: Sequence[Sequence[float]]) -> "BrokenLine":
        """Vertices given as [x_1, ..., x_n, t]."""
        vertices = []
        for point in points:
            if len(point) < 2:
                raise GeometryError(f"Vertex needs space and time components: {point}")
            vertices.append((tuple(float(v) for v in point[:-1]), float(point[-1])))
        return cls(vertices=tuple(vertices))

    @property
    def n(self) -> int:
        return len(self.vertices[0][0])

    @property
    def upper_end(self) -> Vertex:
        return self.vertices[-1]

    def segments(self) -> Iterator[Tuple[Vertex, Vertex]]:
        return zip(self.vertices, self.vertices[1:])


@dataclass(frozen=True)
class CylinderChain:
    """Inclined cylinders whose axes join end to end."""

    segments: Tuple[InclinedCylinder, ...]

    def __post_init__(self) -> None:
        for first, second in zip(self.segments, self.segments[1:]):
            if abs(first.base.t2 - second.base.t1) > JUNCTION_TOLERANCE:
                raise GeometryError(
                    f"Chain segments do not meet in time: "
                    f"{first.base.t2} vs {second.base.t1}"
                )
            end = first.axis(first.base.t2)
            gap = np.linalg.norm(end - second.axis(second.base.t1))
            if gap > JUNCTION_TOLERANCE:
                raise GeometryError(f"Chain axes are discontinuous (gap {gap:.3g})")

    @property
    def radius(self) -> float:
        return min(segment.base.R for segment in self.segments)

    def axis_points(self, per_segment: int = 8) -> List[Tuple[np.ndarray, float]]:
        """Axis samples strictly inside each segment's time interval."""
        points = []
        for segment in self.segments:
            t1, t2 = segment.base.t1, segment.base.t2
            for k in range(per_segment):
                t = t1 + (k + 0.5) * (t2 - t1) / per_segment
                points.append((segment.axis(t), t))
        return points


def contains(
    domain: Sequence[InclinedCylinder], point: Tuple[Sequence[float], float]
) -> bool:
    """True iff the point lies strictly inside some member of the union."""
    x, t = point
    return any(member.contains(x, t) for member in domain)


def _lateral_offsets(n: int, radius: float) -> np.ndarray:
    if n == 1:
        return np.array([[-radius], [radius]])
    if n == 2:
        angles = np.linspace(0.0, 2.0 * np.pi, 8, endpoint=False)
        return radius * np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    eye = np.eye(n)
    return radius * np.concatenate([eye, -eye])


def _chain_inside(
    chain: CylinderChain, domain: Sequence[InclinedCylinder], samples: int
) -> bool:
    offsets = _lateral_offsets(chain.segments[0].n, chain.radius)
    for axis_point, t in chain.axis_points(samples):
        if not contains(domain, (axis_point, t)):
            return False
        for offset in offsets:
            if not contains(domain, (axis_point + offset, t)):
                return False
    return True


def _build_chain(line: BrokenLine, radius: float) -> CylinderChain:
    segments = []
    for (x_a, t_a), (x_b, t_b) in line.segments():
        eta = (np.asarray(x_b) - np.asarray(x_a)) / (t_b - t_a)
        segments.append(InclinedCylinder.create(x_a, radius, t_a, t_b, eta))
    return CylinderChain(segments=tuple(segments))


def cover_broken_line(
    line: BrokenLine,
    radius: float,
    domain: Optional[Sequence[InclinedCylinder]] = None,
    clearance_samples: int = 16,
) -> CylinderChain:
    """One inclined cylinder per segment, axis along the segment.

    When ``domain`` is given, the chain is sampled along axes and lateral
    surfaces; the radius is halved until the samples lie inside the domain.

    Raises:
        ContainmentError: no radius within the shrink budget fits
    """
    if not radius > 0:
        raise GeometryError(f"Radius must be positive, got {radius}")

    current = radius
    for attempt in range(MAX_RADIUS_SHRINKS + 1):
        chain = _build_chain(line, current)
        if domain is None or _chain_inside(chain, domain, clearance_samples):
            if attempt:
                logger.info(
                    "Chain radius shrunk to fit domain",
                    requested=radius,
                    radius=current,
                    shrinks=attempt,
                )
            return chain
        current *= 0.5

    raise ContainmentError(
        f"Broken line chain does not fit the domain after {MAX_RADIUS_SHRINKS} "
        f"radius halvings (last radius {current * 2:.3g})"
    )
