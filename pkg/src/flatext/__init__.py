"""Flat extensions of surfaces with boundary and envelope singularities."""
from .expr import parse
from .jets import Jet, get_backend, jet_compose_curve, jet_lift

__version__ = "0.1.0"
