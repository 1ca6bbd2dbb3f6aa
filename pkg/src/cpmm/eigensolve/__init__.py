"""Nonnegative eigenvectors of countable transition matrices."""
from __future__ import annotations

from .closed_forms import lambda_min, propagate_s8, s8_entries, s8_params, solve_closed_form_s8
from .entries import Entries, ExpSumEntries, TableEntries, ordered_sum, total_sum
from .outcome import EigenOutcome, PhaseSpaceClass
from .phase import classify_phase_space
from .recurrence import (
    eigendirection, eigenvalues, m_matrix, propagate_s9, recurrence_model, spectral_case,
)
from .residual import residual_check, row_sum
from .solve import solve, solve_finite
from .special import nonexistence_s10, s12_sqrt_lambda, solve_s11, solve_s12
from .truncation import PerronEstimates, power_iteration, truncation_perron

__all__ = [
    "EigenOutcome", "Entries", "ExpSumEntries", "PerronEstimates", "PhaseSpaceClass",
    "TableEntries", "classify_phase_space", "eigendirection", "eigenvalues", "lambda_min",
    "m_matrix", "nonexistence_s10", "ordered_sum", "power_iteration", "propagate_s8",
    "propagate_s9", "recurrence_model", "residual_check", "row_sum", "s12_sqrt_lambda",
    "s8_entries", "s8_params", "solve", "solve_closed_form_s8", "solve_finite", "solve_s11",
    "solve_s12", "spectral_case", "total_sum", "truncation_perron",
]
