"""Minimum-vertex simplification of uncertain polygonal curves."""

from .geometry import get_tolerance, set_tolerance, tolerance
from .model import (UncertainCurve, curve, disk, indecisive, polygon, segment,
                    validate)
from .shortcut import check_shortcut, shortcut_valid

__all__ = [
    "UncertainCurve", "curve", "disk", "indecisive", "polygon", "segment", "validate",
    "check_shortcut", "shortcut_valid", "get_tolerance", "set_tolerance", "tolerance",
]
__version__ = "0.1.0"
