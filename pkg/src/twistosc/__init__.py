"""Twist-deformed planar oscillator: closed forms and two numerical oracles.

The closed-form layer lives in :mod:`twistosc.core`; :mod:`twistosc.fock`
and :mod:`twistosc.radial` recompute the same quantities by truncated Fock
diagonalisation and by a finite-difference radial solver.
"""

from .coherent import CoherentAmplitudes, coherent_moments, coherent_vector, cutoff_for_tolerance
from .core import (
    EffectiveParams,
    ModeOccupation,
    OscillatorParams,
    QuantumNumbers,
    allowed_azimuthal,
    angular_momentum_eigenvalue,
    effective_params,
    eigenstate_uncertainty_product,
    energy_modes,
    energy_nl,
)
from .fock import (
    FockBasis,
    FockOperator,
    StateVector,
    commutator,
    diagonalize_interior,
    expectation_and_variance,
    fock_state,
    ladder_matrices,
    observable_matrices,
)
from .radial import (
    RadialGrid,
    RadialSolution,
    azimuthal_eval,
    energy_from_dimensionless,
    eval_radial,
    fd_spectrum,
    normalize_radial,
    ode_residual,
    radial_polynomial_coeffs,
)
from .twist import Family, TwistFunction, eval_twist, make_twist, parse_twist

__version__ = "0.1.0"
