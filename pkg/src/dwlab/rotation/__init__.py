"""Angular mode decomposition and the 1-D radial operator families."""
from .modes import (
    ModeBank,
    RadialProfile,
    angular_decompose,
    mode_bank_from_samples,
    mode_norm,
    synthesize,
)
from .operators import apply_Bl, apply_Tl, bl_profile, tl_values
from .certify import RadialOperator, certify_norm, power_iteration
from .schur import SCHUR_CLAIM_IDS, schur_witness_check

__all__ = [
    "ModeBank",
    "RadialProfile",
    "angular_decompose",
    "mode_bank_from_samples",
    "mode_norm",
    "synthesize",
    "apply_Tl",
    "apply_Bl",
    "bl_profile",
    "tl_values",
    "RadialOperator",
    "certify_norm",
    "power_iteration",
    "SCHUR_CLAIM_IDS",
    "schur_witness_check",
]
