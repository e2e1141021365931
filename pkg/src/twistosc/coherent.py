"""Coherent states |c_+, c_-> of the two circular modes."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import pdtrc

from .core import OscillatorParams, effective_params, energy_modes
from .exceptions import InvalidParameterError, TruncationError
from .fock import FockBasis, Observables, StateVector, expectation_and_variance, observable_matrices

DEFAULT_TAIL_TOL = 1e-12


@dataclass(frozen=True)
class CoherentAmplitudes:
    c_plus: complex
    c_minus: complex

    def __post_init__(self):
        for name in ("c_plus", "c_minus"):
            value = complex(getattr(self, name))
            if not np.isfinite(value):
                raise InvalidParameterError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)


def _tail(mu: float, n: int) -> float:
    # Poisson(mu) mass strictly above n
    return 0.0 if mu == 0.0 else float(pdtrc(n, mu))


def cutoff_for_tolerance(c: CoherentAmplitudes, tol: float = DEFAULT_TAIL_TOL) -> int:
    """Smallest cutoff whose discarded Poisson tail is below ``tol`` in both modes."""
    if not 0 < tol < 1:
        raise InvalidParameterError(f"tol must lie in (0, 1), got {tol!r}")
    cutoff = 0
    for amp in (c.c_plus, c.c_minus):
        mu = abs(amp) ** 2
        n = 0
        while _tail(mu, n) >= tol:
            n += 1
        cutoff = max(cutoff, n)
    return cutoff


def _mode_amplitudes(c: complex, cutoff: int) -> np.ndarray:
    amps = np.empty(cutoff + 1, dtype=complex)
    amps[0] = np.exp(-0.5 * abs(c) ** 2)
    for n in range(1, cutoff + 1):
        amps[n] = amps[n - 1] * c / np.sqrt(n)
    return amps


def coherent_vector(basis: FockBasis, c: CoherentAmplitudes, tol: float = DEFAULT_TAIL_TOL) -> StateVector:
    """Truncated coherent state, renormalised to unit norm.

    Raises :class:`TruncationError` when the basis cannot hold the state to
    tail mass ``tol``.
    """
    required = cutoff_for_tolerance(c, tol)
    if basis.cutoff < required:
        raise TruncationError(
            f"cutoff {basis.cutoff} too small for c=({c.c_plus}, {c.c_minus}); "
            f"need at least {required}",
            required=required,
        )
    amps = np.kron(_mode_amplitudes(c.c_plus, basis.cutoff), _mode_amplitudes(c.c_minus, basis.cutoff))
    state = StateVector(basis, amps)
    return state.normalized()


def eigenrelation_residual(ops: Observables, state: StateVector, c: CoherentAmplitudes) -> tuple[float, float]:
    """Interior norms of ``a_(+/-)|c> - c_(+/-)|c>``."""
    idx = ops.basis.interior
    psi = state.amplitudes
    out = []
    for a, value in ((ops.a_plus, c.c_plus), (ops.a_minus, c.c_minus)):
        diff = (a.matrix @ psi - value * psi)[idx]
        out.append(float(np.linalg.norm(diff)))
    return out[0], out[1]


@dataclass(frozen=True)
class CoherentReport:
    var_x1: float
    var_x2: float
    var_p1: float
    var_p2: float
    product_1: float
    product_2: float
    mean_L: float
    var_L: float
    mean_H: float
    identity_residual: float
    # closed-form targets
    var_x_expected: float
    var_p_expected: float
    mean_L_expected: float
    var_L_expected: float
    residual_plus: float
    residual_minus: float

    def to_dict(self) -> dict:
        return asdict(self)


def coherent_moments(
    params: OscillatorParams,
    f: float,
    basis: FockBasis,
    c: CoherentAmplitudes,
    ops: Observables | None = None,
) -> CoherentReport:
    """Matrix-computed moments of ``|c_+, c_->`` alongside their closed forms.

    ``identity_residual`` measures the energy decomposition
    ``<H> = E_00 + (Omega_f/hbar) Var(L) + (M_f Omega_f^2 f / (2 hbar)) <L>``,
    with ``<H>`` taken in the circular-mode Hamiltonian.
    """
    ops = ops or observable_matrices(params, f, basis)
    state = coherent_vector(basis, c)
    hbar = params.hbar
    eff = effective_params(params, f)

    var = {}
    for name in ("x1", "x2", "p1", "p2"):
        _, var[name] = expectation_and_variance(getattr(ops, name), state)
    mean_L, var_L = expectation_and_variance(ops.L, state)
    mean_H, _ = expectation_and_variance(ops.H_ladder, state)
    mean_L, mean_H = mean_L.real, mean_H.real

    rhs = (
        energy_modes(params, f, (0, 0))
        + (eff.omega_eff / hbar) * var_L
        + (eff.stiffness * f / (2.0 * hbar)) * mean_L
    )
    n_plus, n_minus = abs(c.c_plus) ** 2, abs(c.c_minus) ** 2
    res_p, res_m = eigenrelation_residual(ops, state, c)
    return CoherentReport(
        var_x1=var["x1"],
        var_x2=var["x2"],
        var_p1=var["p1"],
        var_p2=var["p2"],
        product_1=var["x1"] * var["p1"],
        product_2=var["x2"] * var["p2"],
        mean_L=mean_L,
        var_L=var_L,
        mean_H=mean_H,
        identity_residual=abs(mean_H - rhs),
        var_x_expected=0.5 * hbar / (eff.mass_eff * eff.omega_eff),
        var_p_expected=0.5 * hbar * eff.mass_eff * eff.omega_eff,
        mean_L_expected=hbar * (n_minus - n_plus),
        var_L_expected=hbar**2 * (n_minus + n_plus),
        residual_plus=res_p,
        residual_minus=res_m,
    )
