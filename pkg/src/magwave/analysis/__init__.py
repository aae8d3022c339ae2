from .bounds import GfReport, gf_bounds, gf_values
from .effective import (
    ConditionViolation,
    EffectivePotential1D,
    effective_potential,
    ground_1d,
    solve_1d,
    variational_crosscheck,
)
from .hardy import HardyWeight, hardy_estimate, hardy_ladder
from .sweep import SweepResult, alpha_sweep
from .weyl import bump, decay_slope, quasimode, weyl_grid, weyl_residual

__all__ = [
    "ConditionViolation", "EffectivePotential1D", "GfReport", "HardyWeight", "SweepResult",
    "alpha_sweep", "bump", "decay_slope", "effective_potential", "gf_bounds", "gf_values",
    "ground_1d", "hardy_estimate", "hardy_ladder", "quasimode", "solve_1d",
    "variational_crosscheck", "weyl_grid", "weyl_residual",
]
