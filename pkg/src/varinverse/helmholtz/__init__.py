"""Executable Helmholtz conditions, metrizability tests and pointwise obstructions."""

from .conditions import (
    MIN_CHECK_SAMPLES,
    MultiplierData,
    check_lagrangian,
    check_semibasic,
    euler_lagrange_coords,
    form_degree,
    helmholtz_residuals,
    homogeneous_check,
    multiplier_data,
    multiplier_residuals,
    potential,
)
from .errors import (
    HelmholtzError,
    NotFlat,
    NotHomogeneous,
    NotSemiBasic,
    NotSpray,
    PostconditionFailed,
    PreconditionFailed,
    ZeroDegree,
)
from .metrizability import finsler_metrizability_check, g_rank, hamel_check, projective_metrizability_check
from .obstruction import (
    NO_OBSTRUCTION,
    NOT_LAGRANGIAN,
    ONLY_DEGENERATE,
    ObstructionReport,
    constraint_matrix,
    obstruction_rank,
)
from .report import REPORT_VERSION, CheckReport, ConditionName, ConditionResidual

__all__ = [
    "CheckReport", "ConditionName", "ConditionResidual", "HelmholtzError", "MIN_CHECK_SAMPLES",
    "MultiplierData", "NO_OBSTRUCTION", "NOT_LAGRANGIAN", "NotFlat", "NotHomogeneous", "NotSemiBasic",
    "NotSpray", "ONLY_DEGENERATE", "ObstructionReport", "PostconditionFailed", "PreconditionFailed",
    "REPORT_VERSION", "ZeroDegree", "check_lagrangian", "check_semibasic", "constraint_matrix",
    "euler_lagrange_coords", "finsler_metrizability_check", "form_degree", "g_rank", "hamel_check",
    "helmholtz_residuals", "homogeneous_check", "multiplier_data", "multiplier_residuals",
    "obstruction_rank", "potential", "projective_metrizability_check",
]
