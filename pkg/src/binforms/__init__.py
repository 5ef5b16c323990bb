"""Invariants of V1 + V3 + V4 (covariants of a binary cubic and quartic)."""

from .forms import GENERIC, Form, apply_group_element, transvectant
from .generators import run_pipeline, sylvester_table
from .grading import MultiDegree, invariant_dimension, poincare_coeffs, weight_count
from .named import named_invariants
from .polys import CoeffPoly
from .recipe import evaluate_recipe, parse_recipe

__all__ = [
    "CoeffPoly", "Form", "GENERIC", "MultiDegree", "apply_group_element", "evaluate_recipe",
    "invariant_dimension", "named_invariants", "parse_recipe", "poincare_coeffs",
    "run_pipeline", "sylvester_table", "transvectant", "weight_count",
]
