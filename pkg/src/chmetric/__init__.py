"""Lipschitz metric for conservative Camassa-Holm solutions."""

__version__ = "0.1.0"
