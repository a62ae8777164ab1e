"""Exact 0-1 optimization of defender schedules on the two-dimensional box."""
from .model import (
    BoundaryReach,
    Constraint,
    IpModel,
    MinTotalBurn,
    Solution,
    assignment_from_schedule,
    build_deadline_model,
    build_min_burn_model,
    export_lp,
    extract_strategy,
    schedule_from_assignment,
    verify_solution,
)
from .search import SearchBudget, solve

__all__ = [
    "BoundaryReach",
    "Constraint",
    "IpModel",
    "MinTotalBurn",
    "SearchBudget",
    "Solution",
    "assignment_from_schedule",
    "build_deadline_model",
    "build_min_burn_model",
    "export_lp",
    "extract_strategy",
    "schedule_from_assignment",
    "solve",
    "verify_solution",
]
