"""Field near a curvature jump under tangential plane-wave incidence."""

__version__ = "0.1.0"
