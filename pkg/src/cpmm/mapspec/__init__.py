"""Countably piecewise monotone Markov maps: model, text format, transition rules."""
from __future__ import annotations

from .geometry import Geometry, Piece, evaluate_map
from .mixing import MixingReport, mixing_heuristic
from .model import BasicIntervalId, MapSpec
from .parser import parse_spec, print_spec
from .transitions import TransitionRuleSet, compile_transitions, truncate
from .validate import validate_spec

__all__ = [
    "BasicIntervalId", "Geometry", "MapSpec", "MixingReport", "Piece", "TransitionRuleSet",
    "compile_transitions", "evaluate_map", "mixing_heuristic", "parse_spec", "print_spec",
    "truncate", "validate_spec",
]
