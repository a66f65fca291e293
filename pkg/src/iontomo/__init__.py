"""iontomo: symplectic tomography of packet states in a modulated trap.

Computes the classical complex trajectory of a parametrically driven
oscillator, the coherent and even/odd superposition (cat) states riding on
it, their Wigner maps, and the marginal distributions of the symplectic
observable X = mu q + nu p + delta -- each by several independent routes that
cross-validate one another -- plus the tomographic inversion back to the
Wigner function and the classical-like evolution equation the tomograms obey.
"""

from ._backend import BACKEND, backend_name
from .errors import (
    CoverageError,
    DegenerateStateError,
    IntegrationError,
    IonTomoError,
)
from .evolution import (
    TomogramField,
    build_field,
    characteristic_origin,
    evolution_residual,
    flow_jacobian_determinant,
    propagate,
)
from .states import (
    StateSpec,
    WaveFunction,
    WignerMap,
    eval_cat,
    eval_coherent,
    evaluate_state,
    state_at,
    wigner_analytic,
    wigner_cat_analytic,
    wigner_coherent_analytic,
    wigner_numeric,
)
from .tomograms import (
    ReferenceFrame,
    Tomogram,
    TomogramFamily,
    build_family,
    family_from_analytic,
    family_from_tomograms,
    family_grid,
    forward_transform,
    frame_quadrature,
    gaussian_moments,
    inverse_transform,
    marginal_analytic,
    marginal_cat,
    marginal_gaussian,
    momentum_wavefunction,
    optical_slice,
    suggest_x_grid,
)
from .trajectory import (
    ComplexTrajectory,
    TrapParams,
    epsilon_arg_at,
    epsilon_at,
    frequency_squared,
    solve_epsilon,
    wronskian_residual,
)
from .verify import VerifyCheck, run_verification

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ComplexTrajectory",
    "CoverageError",
    "DegenerateStateError",
    "IntegrationError",
    "IonTomoError",
    "ReferenceFrame",
    "StateSpec",
    "Tomogram",
    "TomogramFamily",
    "TomogramField",
    "TrapParams",
    "VerifyCheck",
    "WaveFunction",
    "WignerMap",
    "backend_name",
    "build_family",
    "build_field",
    "characteristic_origin",
    "epsilon_arg_at",
    "epsilon_at",
    "eval_cat",
    "eval_coherent",
    "evaluate_state",
    "evolution_residual",
    "family_from_analytic",
    "family_from_tomograms",
    "family_grid",
    "flow_jacobian_determinant",
    "forward_transform",
    "frame_quadrature",
    "frequency_squared",
    "gaussian_moments",
    "inverse_transform",
    "marginal_analytic",
    "marginal_cat",
    "marginal_gaussian",
    "momentum_wavefunction",
    "optical_slice",
    "propagate",
    "run_verification",
    "solve_epsilon",
    "state_at",
    "suggest_x_grid",
    "wigner_analytic",
    "wigner_cat_analytic",
    "wigner_coherent_analytic",
    "wigner_numeric",
    "wronskian_residual",
]
