"""Constant slope models built from eigenvectors, and their obstructions."""
from __future__ import annotations

from .atoms import AccumulationScan, AtomScanReport, accumulation_length_scan, atom_scan
from .invariants import InvariantReport, check_invariants
from .model import ConstantSlopeModel, build_model
from .psi import PsiTable, default_basepoint, psi_eval
from .refine import PartitionRefinement, refine
from .s11 import NestedLengths, lengths_nested_intersection_s11
from .verdict import CONJUGATE, OBSTRUCTED, Verdict, default_window, verdict

__all__ = [
    "AccumulationScan", "AtomScanReport", "CONJUGATE", "ConstantSlopeModel", "InvariantReport",
    "NestedLengths",
    "OBSTRUCTED", "PartitionRefinement", "PsiTable", "Verdict", "accumulation_length_scan",
    "atom_scan", "build_model", "check_invariants", "default_basepoint", "default_window",
    "lengths_nested_intersection_s11", "psi_eval", "refine", "verdict",
]
