"""Phase-space localisation measures of spin-j pure states."""
from .spin import (
    PureState, Rotation, SpherePoint, StellarRoots, amplitudes_from_state, basis_state,
    bargmann_eval, coherent_state, husimi_eval, kernel, mobius_rotate_point, roots_from_state,
    rotate_state, state_from_amplitudes, state_from_roots,
)
from .quadrature import ConvergenceError, QuadratureGrid
from .entropy import (
    MeasureReport, coherent_closed_forms, dual_entropy, dual_moment, jz_closed_forms,
    measure_report, moment_exact, moment_quadrature, participation, dual_participation,
    renyi_entropy, wehrl_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "PureState", "Rotation", "SpherePoint", "StellarRoots", "amplitudes_from_state", "basis_state",
    "bargmann_eval", "coherent_state", "husimi_eval", "kernel", "mobius_rotate_point",
    "roots_from_state", "rotate_state", "state_from_amplitudes", "state_from_roots",
    "ConvergenceError", "QuadratureGrid", "MeasureReport", "coherent_closed_forms", "dual_entropy",
    "dual_moment", "jz_closed_forms", "measure_report", "moment_exact", "moment_quadrature",
    "participation", "dual_participation", "renyi_entropy", "wehrl_entropy",
]
