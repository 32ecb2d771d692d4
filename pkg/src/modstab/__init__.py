"""Numerical stability laboratory for a quadratic-type functional equation.

Builds the exact quadratic map near an approximately quadratic one by
rescaled dyadic iteration, and certifies explicit error bounds in modular
spaces (with or without a doubling condition) and in beta-homogeneous
normed spaces.
"""

from .accumulation import CompensatedSum, CompensatedVectorSum, fixed_order_sum
from .equation import (Control, ControlCheckReport, DivergentSeriesError,
                       FunctionHandle, SeriesBound, SeriesConvergenceError,
                       VanishingReport, as_point, check_control, defect,
                       defect_size, series_beta, series_down, series_up,
                       vanishing_condition)
from .extract import (Certificate, CertRow, ExtractionConfig,
                      ExtractionResult, GridMap, HomogeneityReport, TraceRow,
                      cauchy_profile, certify, extract_down, extract_grid,
                      extract_up, homogeneity_check, uniqueness_probe)
from .lab import (Instance, PRESETS, default_triple_grid, get_preset,
                  make_quadratic, oscillation, perturb_bounded, perturb_power,
                  rebuild_with_seed, saturating_instance)
from .modular import (AxiomCheck, AxiomReport, Delta2Result, FNorm, Modular,
                      UnboundedNormError, as_vector, check_fnorm_axioms,
                      check_modular_axioms, default_ladder, delta2_estimate,
                      luxemburg_norm, sample_pairs)
from .quadratic import QuadraticityReport, biadditive_form, check_quadratic

__version__ = "0.1.0"

__all__ = [
    "AxiomCheck", "AxiomReport", "Certificate", "CertRow",
    "CompensatedSum", "CompensatedVectorSum", "Control", "ControlCheckReport",
    "Delta2Result", "DivergentSeriesError", "ExtractionConfig",
    "ExtractionResult", "FNorm", "FunctionHandle", "GridMap",
    "HomogeneityReport", "Instance", "Modular", "PRESETS",
    "QuadraticityReport", "SeriesBound", "SeriesConvergenceError", "TraceRow",
    "UnboundedNormError", "VanishingReport", "as_point", "as_vector",
    "biadditive_form", "cauchy_profile", "certify", "check_control",
    "check_fnorm_axioms", "check_modular_axioms", "check_quadratic",
    "default_ladder", "default_triple_grid", "defect", "defect_size",
    "extract_down", "extract_grid", "extract_up", "fixed_order_sum",
    "get_preset", "homogeneity_check", "luxemburg_norm", "make_quadratic",
    "oscillation", "perturb_bounded", "perturb_power", "rebuild_with_seed",
    "sample_pairs", "saturating_instance", "series_beta", "series_down",
    "series_up", "uniqueness_probe", "vanishing_condition",
]
