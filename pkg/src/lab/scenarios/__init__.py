"""Named maximum-principle scenarios."""

from .axis import axis_strictness, inclined, shifted_maximum
from .chain import broken_line, elliptic_reduction
from .comparison import positivity, strong_comparison
from .witnesses import truncated_counterexample

__all__ = [
    "axis_strictness",
    "inclined",
    "shifted_maximum",
    "broken_line",
    "elliptic_reduction",
    "positivity",
    "strong_comparison",
    "truncated_counterexample",
]
