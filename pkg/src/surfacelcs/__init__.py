"""Lower central series, Fox calculus and self-intersection of curves on surfaces."""

__version__ = "0.1.0"
