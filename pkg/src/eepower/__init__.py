"""Energy-efficient power control: allocation solvers, channel models,
metrics, a brute-force verification oracle, and Monte-Carlo experiment
pipelines with a CSV-emitting CLI."""

__version__ = "0.1.0"

from .allocator import (
    Allocation,
    GeeProblem,
    LinkConfig,
    ee_of,
    eepa,
    gee_dinkelbach,
    se_of,
    wmee_maxmin,
    wpa,
    wpee_ascent,
    wsee_ascent,
)
from .channel import FadingSpec, draw_gains, draw_matrix, rng_for
from .errors import InfeasibleError, NumericalError, PowerControlError
from .experiments import CurveSet, ExperimentSpec, default_spec, run
from .metrics import EeSePoint, MultiLinkReport, evaluate, jain_index, trace_ee_se
from .numerics import bisect, lambert_w0, svd_gains
from .oracle import GridSpec, grid_argmax

__all__ = [
    "Allocation",
    "CurveSet",
    "EeSePoint",
    "ExperimentSpec",
    "FadingSpec",
    "GeeProblem",
    "GridSpec",
    "InfeasibleError",
    "LinkConfig",
    "MultiLinkReport",
    "NumericalError",
    "PowerControlError",
    "bisect",
    "default_spec",
    "draw_gains",
    "draw_matrix",
    "ee_of",
    "eepa",
    "evaluate",
    "gee_dinkelbach",
    "grid_argmax",
    "jain_index",
    "lambert_w0",
    "rng_for",
    "run",
    "se_of",
    "svd_gains",
    "trace_ee_se",
    "wmee_maxmin",
    "wpa",
    "wpee_ascent",
    "wsee_ascent",
]
