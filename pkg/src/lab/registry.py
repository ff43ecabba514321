"""Experiment registry."""

from dataclasses import dataclass
from typing import Callable, Dict, List

from src.exceptions import UnknownExperimentError

from .context import ExperimentContext
from .scenarios import (
    axis_strictness,
    broken_line,
    elliptic_reduction,
    inclined,
    positivity,
    shifted_maximum,
    strong_comparison,
    truncated_counterexample,
)

Scenario = Callable[[ExperimentContext], None]


@dataclass(frozen=True)
class Experiment:
    """Registered scenario."""

    name: str
    description: str
    run: Scenario


_EXPERIMENTS: Dict[str, Experiment] = {
    e.name: e
    for e in (
        Experiment(
            "axis_strictness",
            "Interior maximum stays below M on the cylinder axis; barrier check",
            axis_strictness,
        ),
        Experiment(
            "inclined",
            "Axis strictness in a tilted cylinder against the straightened run",
            inclined,
        ),
        Experiment(
            "broken_line",
            "Constant propagation and strict gap along a cylinder chain",
            broken_line,
        ),
        Experiment(
            "strong_comparison",
            "Difference of ordered solutions is a Pucci subsolution <= 0",
            strong_comparison,
        ),
        Experiment(
            "positivity",
            "Nonnegative nontrivial data turns strictly positive",
            positivity,
        ),
        Experiment(
            "truncated_counterexample",
            "x_n² witness: truncated operators violate the strong principles",
            truncated_counterexample,
        ),
        Experiment(
            "elliptic_reduction",
            "Stationary elliptic solution as parabolic data",
            elliptic_reduction,
        ),
        Experiment(
            "shifted_maximum",
            "Axis strictness with a negative maximum, no lower-order terms",
            shifted_maximum,
        ),
    )
}


def get_experiment(name: str) -> Experiment:
    try:
        return _EXPERIMENTS[name]
    except KeyError:
        raise UnknownExperimentError(
            f"Unknown experiment {name!r}; expected one of {list(_EXPERIMENTS)}"
        ) from None


def list_experiments() -> List[Experiment]:
    return list(_EXPERIMENTS.values())
