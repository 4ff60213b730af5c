"""SBP-SAT finite difference operators with dual-consistent boundary penalties."""

from ._core import (
    SbpsatError,
    __version__,
    build_operators,
    convergence_study,
    omega_sweep,
    preset_names,
    run_case,
    scalar_penalties,
    verify_sbp,
)

__all__ = [
    "SbpsatError",
    "__version__",
    "build_operators",
    "convergence_study",
    "omega_sweep",
    "preset_names",
    "run_case",
    "scalar_penalties",
    "verify_sbp",
]
