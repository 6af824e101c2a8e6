"""Exact overlap counting, pressure and dimension bounds for rational-slope
projections of the uniform Sierpinski measure."""

__version__ = "0.1.0"

from .arith import Slope, make_slope  # noqa: E402

__all__ = ["Slope", "make_slope", "__version__"]
