"""Cylinders, inclined cylinders, broken lines and cylinder chains."""

from .chains import BrokenLine, CylinderChain, contains, cover_broken_line
from .cylinders import (
    Cylinder,
    InclinedCylinder,
    pull_back,
    push_forward,
    straighten,
    tilt_operator,
    tilt_transform,
    unstraighten,
)

__all__ = [
    "Cylinder",
    "InclinedCylinder",
    "BrokenLine",
    "CylinderChain",
    "tilt_transform",
    "tilt_operator",
    "straighten",
    "unstraighten",
    "pull_back",
    "push_forward",
    "cover_broken_line",
    "contains",
]
