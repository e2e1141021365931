"""Invariant checks shared by the ``verify`` subcommand and the test-suite."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import core
from .coherent import CoherentAmplitudes, coherent_moments, cutoff_for_tolerance
from .core import OscillatorParams, allowed_azimuthal, effective_params, energy_modes, energy_nl
from .fock import FockBasis, commutator, diagonalize_interior, expectation_and_variance, fock_state, observable_matrices
from .radial import (
    RadialGrid,
    energy_from_dimensionless,
    fd_convergence,
    fd_spectrum,
    ode_residual,
    radial_polynomial_coeffs,
)
from .twist import Family, TwistFunction

# coherent moments are compared at 1e-10; a 1e-12 tail leaves ~1e-10 of
# renormalisation error in Var(L) for |c| ~ 2, so bases are sized at 1e-14
MOMENT_TAIL_TOL = 1e-14

SAMPLE_AMPLITUDES = (
    CoherentAmplitudes(0.0, 0.0),
    CoherentAmplitudes(1.0, 2.0j),
    CoherentAmplitudes(0.6 - 0.8j, -1.3 + 0.5j),
)


@dataclass
class Check:
    module: str
    name: str
    observed: float
    tolerance: float
    passed: bool
    f: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        where = "" if self.f is None else f" [f={self.f!r}]"
        return (
            f"{status}  {self.module:<16} {self.name}{where}: "
            f"observed {self.observed:.3e} (tolerance {self.tolerance:.1e})"
        )


def _check(module, name, observed, tolerance, f=None) -> Check:
    observed = float(observed)
    return Check(module, name, observed, tolerance, bool(observed <= tolerance), f)


def max_dev(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def rel_dev(a, b) -> float:
    b = np.asarray(b)
    return max_dev(a, b) / max(float(np.max(np.abs(b))), np.finfo(float).tiny)


def twist_checks(twist: TwistFunction, times) -> list[Check]:
    out = []
    values = [twist(t) for t in times]
    if twist.family is Family.CONSTANT:
        out.append(_check("twist_functions", "constant family is time independent",
                          max(abs(v - twist.kappa) for v in values), 0.0))
    if twist.family is Family.SIN:
        period = 2.0 * math.pi * twist.tau
        dev = max(abs(twist(t + period) - twist(t)) for t in times)
        out.append(_check("twist_functions", "sin family is 2 pi tau periodic",
                          dev, 1e-12 * max(1.0, abs(twist.kappa))))
    zero = TwistFunction(twist.family, 0.0, twist.tau)
    out.append(_check("twist_functions", "kappa = 0 vanishes", max(abs(zero(t)) for t in times), 0.0))
    return out


def core_checks(params: OscillatorParams, f: float, n_max: int = 8) -> list[Check]:
    m, w = params.mass, params.omega
    eff = effective_params(params, f)
    out = [
        _check("oscillator_core", "M_f Omega_f^2 = m omega^2",
               abs(eff.stiffness - m * w**2) / (m * w**2), 1e-14, f),
        _check("oscillator_core", "Omega_+ Omega_- = omega^2",
               abs(eff.omega_plus * eff.omega_minus - w**2) / w**2, 1e-14, f),
        _check("oscillator_core", "Omega_+ + Omega_- = 2 Omega_f",
               abs(eff.omega_plus + eff.omega_minus - 2 * eff.omega_eff) / eff.omega_eff, 1e-14, f),
        _check("oscillator_core", "Omega_+/- > 0",
               0.0 if min(eff.omega_plus, eff.omega_minus) > 0 else 1.0, 0.0, f),
    ]
    worst = 0.0
    for n in range(n_max + 1):
        for l in allowed_azimuthal(n):
            a = energy_nl(params, f, (n, l))
            b = energy_modes(params, f, ((n - l) // 2, (n + l) // 2))
            worst = max(worst, abs(a - b) / abs(b))
    out.append(_check("oscillator_core", "(n, l) and (n_+, n_-) spectra agree", worst, 1e-14, f))
    split = energy_modes(params, f, (0, 1)) - energy_modes(params, f, (1, 0))
    out.append(_check("oscillator_core", "E(0,1) - E(1,0) = f m omega^2",
                      abs(split - f * m * w**2) / max(m * w**2, abs(f) * m * w**2), 1e-12, f))
    bad = sum(
        1 for n in range(n_max + 1)
        if len(allowed_azimuthal(n)) != n + 1 or allowed_azimuthal(n) != [-l for l in reversed(allowed_azimuthal(n))]
    )
    out.append(_check("oscillator_core", "allowed l: n+1 values, symmetric", bad, 0, f))
    return out


def algebra_deviations(ops) -> dict[str, float]:
    """Interior deviations of the canonical commutation relations."""
    hbar, f = ops.params.hbar, ops.f
    eye = np.eye(len(ops.basis.interior))
    dev = {}
    ladders = {"+": ops.a_plus, "-": ops.a_minus}
    worst_ab, worst_abd = 0.0, 0.0
    for A, a in ladders.items():
        for B, b in ladders.items():
            worst_ab = max(worst_ab, max_dev(commutator(a, b).interior(), 0.0))
            target = eye if A == B else 0.0 * eye
            worst_abd = max(worst_abd, max_dev(commutator(a, b.dag()).interior(), target))
    dev["[a_A, a_B] = 0"] = worst_ab
    dev["[a_A, a_B^dag] = delta_AB"] = worst_abd
    xs, ps = (ops.x1, ops.x2), (ops.p1, ops.p2)
    worst_xp, worst_xx, worst_pp = 0.0, 0.0, 0.0
    for i in range(2):
        for j in range(2):
            target = 1j * hbar * eye if i == j else 0.0 * eye
            worst_xp = max(worst_xp, max_dev(commutator(xs[i], ps[j]).interior(), target))
    worst_xx = max_dev(commutator(ops.x1, ops.x2).interior(), 0.0)
    worst_pp = max_dev(commutator(ops.p1, ops.p2).interior(), 0.0)
    dev["[x_i, p_j] = i hbar delta_ij"] = worst_xp
    dev["[x_i, x_j] = 0 = [p_i, p_j]"] = max(worst_xx, worst_pp)
    dev["[xbar_1, xbar_2] = i f"] = max_dev(commutator(ops.xbar1, ops.xbar2).interior(), 1j * f * eye)
    return dev


def hamiltonian_deviations(ops) -> dict[str, float]:
    """Relative interior deviations between the Hamiltonian forms."""
    m, w, hbar, f = ops.params.mass, ops.params.omega, ops.params.hbar, ops.f
    H_xp, H_lad = ops.H_xp.interior(), ops.H_ladder.interior()
    return {
        "H_xp = H_ladder": rel_dev(H_xp, H_lad),
        "H_xp = H_bar (noncommutative form)": rel_dev(H_xp, ops.H_bar.interior()),
        "H_xp - H_ladder = -(f m omega^2 / hbar) L": rel_dev(
            H_xp - H_lad, -(f * m * w**2 / hbar) * ops.L.interior()
        ) if f else 0.0,
        "L = x1 p2 - x2 p1": rel_dev(ops.L_xp.interior(), ops.L.interior()) if ops.basis.cutoff > 1 else 0.0,
    }


def closed_form_levels(params, f, shell_cap) -> list[float]:
    return sorted(
        energy_modes(params, f, (a, n - a)) for n in range(shell_cap + 1) for a in range(n + 1)
    )


def fock_checks(params: OscillatorParams, f: float, cutoff: int = 12) -> list[Check]:
    basis = FockBasis(cutoff)
    ops = observable_matrices(params, f, basis)
    out = [_check("fock_engine", name, dev, 1e-12, f) for name, dev in algebra_deviations(ops).items()]
    for name, dev in hamiltonian_deviations(ops).items():
        out.append(_check("fock_engine", name, dev, 1e-10, f))
    out.append(_check("fock_engine", "[H_ladder, L] = 0", max_dev(commutator(ops.H_ladder, ops.L).matrix, 0.0), 0.0, f))
    out.append(_check("fock_engine", "self-adjointness",
                      max(op.hermiticity_defect() for op in ops.hermitian().values()), 1e-12, f))

    cap = cutoff // 2
    expected = closed_form_levels(params, f, cap)
    for label, H in (("H_ladder", ops.H_ladder), ("H_xp", ops.H_xp)):
        values = [v for v, _ in diagonalize_interior(H, cap)]
        out.append(_check("fock_engine", f"spectrum of {label} = closed form (shells <= {cap})",
                          rel_dev(values, expected), 1e-10, f))

    worst = 0.0
    for n in range(min(4, cutoff - 1) + 1):
        for a in range(n + 1):
            state = fock_state(basis, (a, n - a))
            target = core.eigenstate_uncertainty_product(params, (a, n - a))
            for x, p in ((ops.x1, ops.p1), (ops.x2, ops.p2)):
                _, vx = expectation_and_variance(x, state)
                _, vp = expectation_and_variance(p, state)
                worst = max(worst, abs(vx * vp - target) / target)
    out.append(_check("fock_engine", "eigenstate (dx)^2 (dp)^2 = (hbar^2/4)(1+n)^2", worst, 1e-10, f))
    return out


def coherent_checks(params: OscillatorParams, f: float, amplitudes=SAMPLE_AMPLITUDES) -> list[Check]:
    hbar = params.hbar
    cutoff = max(cutoff_for_tolerance(c, MOMENT_TAIL_TOL) for c in amplitudes)
    basis = FockBasis(max(cutoff, 1))
    ops = observable_matrices(params, f, basis)
    sat, eig, l_mean, l_var, ident = 0.0, 0.0, 0.0, 0.0, 0.0
    for c in amplitudes:
        r = coherent_moments(params, f, basis, c, ops=ops)
        sat = max(sat, abs(r.product_1 - hbar**2 / 4), abs(r.product_2 - hbar**2 / 4))
        eig = max(eig, r.residual_plus, r.residual_minus)
        l_mean = max(l_mean, abs(r.mean_L - r.mean_L_expected))
        l_var = max(l_var, abs(r.var_L - r.var_L_expected))
        ident = max(ident, r.identity_residual / abs(r.mean_H))
    return [
        _check("coherent_states", "a_+/- |c> = c_+/- |c> (interior)", eig, 1e-9, f),
        _check("coherent_states", "(dx_i)^2 (dp_i)^2 = hbar^2/4", sat, 1e-9, f),
        _check("coherent_states", "<L> = hbar(|c_-|^2 - |c_+|^2)", l_mean, 1e-10, f),
        _check("coherent_states", "Var(L) = hbar^2(|c_-|^2 + |c_+|^2)", l_var, 1e-10, f),
        _check("coherent_states", "<H> energy decomposition", ident, 1e-9, f),
    ]


def radial_checks(params: OscillatorParams, f: float, grid: RadialGrid | None = None,
                  n_max: int = 4, cutoff: int = 10) -> list[Check]:
    grid = grid or RadialGrid()
    samples = np.linspace(4.0 / 200, 4.0, 200)
    worst_ode = max(
        ode_residual(radial_polynomial_coeffs(n, l), samples)
        for n in range(13) for l in allowed_azimuthal(n)
    )
    out = [_check("radial_solver", "polynomial ODE residual (n <= 12)", worst_ode, 1e-12, f)]

    worst_fd, worst_rate, worst_cf = 0.0, 0.0, 0.0
    fd_levels = []
    degeneracy = {}
    for l in range(-n_max, n_max + 1):
        count = (n_max - abs(l)) // 2 + 1
        conv = fd_convergence(l, grid, count)
        values = fd_spectrum(l, grid, count)
        for j, value in enumerate(values):
            n = abs(l) + 2 * j
            worst_fd = max(worst_fd, abs(value - (n + 1)))
            degeneracy[round(value)] = degeneracy.get(round(value), 0) + 1
            e_fd = energy_from_dimensionless(params, f, value, l)
            fd_levels.append(e_fd)
            worst_cf = max(worst_cf, abs(e_fd - energy_nl(params, f, (n, l))))
        worst_rate = max(worst_rate, float(np.max(np.abs(conv.observed_order - 2.0))))
    out.append(_check("radial_solver", "fd eigenvalues -> |l| + 1 + 2j", worst_fd, 1e-6, f))
    out.append(_check("radial_solver", "fd Richardson rate = 2", worst_rate, 0.2, f))
    bad = sum(1 for level, count in degeneracy.items() if count != level)
    out.append(_check("radial_solver", "level n collects n+1 values of l", bad, 0, f))

    expected = closed_form_levels(params, f, n_max)
    ops = observable_matrices(params, f, FockBasis(max(cutoff, 2 * n_max)))
    fock_levels = [v for v, _ in diagonalize_interior(ops.H_xp, n_max)]
    out.append(_check("radial_solver", "fd + rescaling = closed form", worst_cf, 1e-6, f))
    out.append(_check("radial_solver", "closed form = Fock diagonalisation", max_dev(fock_levels, expected), 1e-6, f))
    out.append(_check("radial_solver", "fd + rescaling = Fock diagonalisation",
                      max_dev(sorted(fd_levels), fock_levels), 1e-6, f))
    return out


def run_checks(params: OscillatorParams, twist: TwistFunction, times, cutoff: int = 12,
               grid: RadialGrid | None = None) -> list[Check]:
    checks = twist_checks(twist, times)
    seen = set()
    for t in times:
        f = twist(t)
        if f in seen:
            continue
        seen.add(f)
        checks += core_checks(params, f)
        checks += fock_checks(params, f, cutoff)
        checks += coherent_checks(params, f)
        checks += radial_checks(params, f, grid)
    return checks
