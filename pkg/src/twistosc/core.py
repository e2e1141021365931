"""Closed-form layer of the twist-deformed planar oscillator.

Everything here is evaluated at a snapshot value ``f`` of the deformation
function; compose with :func:`twistosc.twist.eval_twist` for time traces.

Conventions
-----------
Energies carry hbar explicitly, ``E = hbar*Omega_+ (n_+ + 1/2) + hbar*Omega_- (n_- + 1/2)``,
with ``Omega_(+/-) = Omega_f -/+ f m omega^2 / (2 hbar)`` and the angular momentum
eigenvalue ``hbar (n_- - n_+)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import InvalidParameterError, QuantumNumberError


@dataclass(frozen=True)
class OscillatorParams:
    mass: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("mass", "omega", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidParameterError(f"{name} must be positive and finite, got {value!r}")

    def to_dict(self) -> dict:
        return {"mass": self.mass, "omega": self.omega, "hbar": self.hbar}


@dataclass(frozen=True)
class EffectiveParams:
    """Effective oscillator seen in the commutative variables at twist value ``f``."""

    f: float
    mass_eff: float
    omega_eff: float
    omega_plus: float
    omega_minus: float

    @property
    def stiffness(self) -> float:
        """``M_f * Omega_f**2``; equals ``m * omega**2`` for every ``f``."""
        return self.mass_eff * self.omega_eff**2


@dataclass(frozen=True)
class ModeOccupation:
    n_plus: int
    n_minus: int

    def __post_init__(self):
        if int(self.n_plus) != self.n_plus or int(self.n_minus) != self.n_minus:
            raise QuantumNumberError(f"occupations must be integers: {self}")
        if self.n_plus < 0 or self.n_minus < 0:
            raise QuantumNumberError(f"occupations must be non-negative: {self}")

    def to_quantum_numbers(self) -> QuantumNumbers:
        return QuantumNumbers(self.n_plus + self.n_minus, self.n_minus - self.n_plus)


@dataclass(frozen=True)
class QuantumNumbers:
    """Main number ``n = n_+ + n_-`` and azimuthal number ``l = n_- - n_+``."""

    n: int
    l: int

    def __post_init__(self):
        n, l = self.n, self.l
        if int(n) != n or int(l) != l:
            raise QuantumNumberError(f"quantum numbers must be integers: n={n!r}, l={l!r}")
        if n < 0 or abs(l) > n or (n - l) % 2:
            raise QuantumNumberError(
                f"invalid pair (n={n}, l={l}): need |l| <= n and n - l even"
            )

    def to_occupation(self) -> ModeOccupation:
        return ModeOccupation((self.n - self.l) // 2, (self.n + self.l) // 2)


def _occupation(occ) -> ModeOccupation:
    return occ if isinstance(occ, ModeOccupation) else ModeOccupation(*occ)


def _quantum_numbers(qn) -> QuantumNumbers:
    return qn if isinstance(qn, QuantumNumbers) else QuantumNumbers(*qn)


def _split_frequencies(omega: float, g: float) -> tuple[float, float]:
    # omega * (sqrt(1 + g^2) -/+ g); the cancelling branch is rewritten as
    # omega / (sqrt(1 + g^2) +/- g) so large |f| keeps full relative precision.
    root = math.sqrt(1.0 + g * g)
    if g >= 0:
        return omega / (root + g), omega * (root + g)
    return omega * (root - g), omega / (root - g)


def effective_params(params: OscillatorParams, f: float) -> EffectiveParams:
    m, w, hbar = params.mass, params.omega, params.hbar
    g = f * m * w / (2.0 * hbar)
    scale = 1.0 + g * g
    omega_plus, omega_minus = _split_frequencies(w, g)
    return EffectiveParams(
        f=f,
        mass_eff=m / scale,
        omega_eff=w * math.sqrt(scale),
        omega_plus=omega_plus,
        omega_minus=omega_minus,
    )


def energy_modes(params: OscillatorParams, f: float, occ) -> float:
    """Energy of ``|n_+, n_->`` from the two circular-mode frequencies."""
    occ = _occupation(occ)
    eff = effective_params(params, f)
    return params.hbar * (
        eff.omega_plus * (occ.n_plus + 0.5) + eff.omega_minus * (occ.n_minus + 0.5)
    )


def energy_nl(params: OscillatorParams, f: float, qn) -> float:
    """Energy labelled by main number ``n`` and azimuthal number ``l``."""
    qn = _quantum_numbers(qn)
    eff = effective_params(params, f)
    return params.hbar * eff.omega_eff * (qn.n + 1) + 0.5 * f * eff.stiffness * qn.l


def allowed_azimuthal(n: int) -> list[int]:
    if n < 0:
        raise QuantumNumberError(f"main quantum number must be non-negative, got {n}")
    return list(range(-n, n + 1, 2))


def eigenstate_uncertainty_product(params: OscillatorParams, occ) -> float:
    """``(Delta x_i)^2 (Delta p_i)^2`` in the energy eigenstate ``|n_+, n_->``."""
    occ = _occupation(occ)
    return 0.25 * params.hbar**2 * (1 + occ.n_plus + occ.n_minus) ** 2


def angular_momentum_eigenvalue(params: OscillatorParams, occ) -> float:
    occ = _occupation(occ)
    return params.hbar * (occ.n_minus - occ.n_plus)


def spectrum_table(params: OscillatorParams, f: float, n_max: int) -> list[tuple[QuantumNumbers, float]]:
    """All ``(n, l)`` levels with ``n <= n_max``, ordered by ``n`` then ``l``."""
    return [
        (QuantumNumbers(n, l), energy_nl(params, f, (n, l)))
        for n in range(n_max + 1)
        for l in allowed_azimuthal(n)
    ]
