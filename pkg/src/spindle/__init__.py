"""Spindle-convex hulls of random points and their limit constants."""
from ._kernels import BACKEND_NAME
from .body import ConvexBody, DiscBody, EllipseBody, TrigBody, constant_width_body, parse_body
from .errors import NumericError, SpindleError, ValidationError
from .hull import DiscPolygon, r_hull, r_hull_oracle

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "ConvexBody",
    "DiscBody",
    "DiscPolygon",
    "EllipseBody",
    "NumericError",
    "SpindleError",
    "TrigBody",
    "ValidationError",
    "constant_width_body",
    "parse_body",
    "r_hull",
    "r_hull_oracle",
]
