"""Countably piecewise monotone Markov maps: eigenvectors, entropy and constant slope models."""
from __future__ import annotations

from .conjugacy import verdict
from .eigensolve import solve
from .errors import CPMMError
from .extreal import ExtInterval
from .mapspec import BasicIntervalId, MapSpec, compile_transitions, evaluate_map, parse_spec, print_spec
from .mapspec.gallery import load

__version__ = "0.1.0"

__all__ = [
    "BasicIntervalId", "CPMMError", "ExtInterval", "MapSpec", "compile_transitions",
    "evaluate_map", "load", "parse_spec", "print_spec", "solve", "verdict",
]
