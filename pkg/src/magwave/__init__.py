"""Spectra of magnetic Laplacians in locally widened planar waveguides."""

from .assembly import OperatorMatrix, assemble_form, mass_matrix
from .eigensolve import (
    SpectrumResult,
    convergence_study,
    count_below_threshold,
    smallest_eigenpairs,
    solve_waveguide,
)
from .gauge import Field, GaugeSamples, apply_gauge_transform, curl_check, poincare_gauge, pullback_gauge
from .grid import Grid, build_grid
from .profiles import ConfigurationError, Profile, check_decay_bounds, check_discrete_condition

__version__ = "0.1.0"
