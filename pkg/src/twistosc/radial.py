"""Polar-coordinate route: radial polynomials and a finite-difference oracle.

The dimensionless radial problem is

    -R'' - R'/rho + (l^2/rho^2 + rho^2/4) R = E R,

with bound states ``R = w(rho) exp(-rho^2/4)`` for ``E = n + 1``.  The
polynomial ``w`` is ``rho^|l|`` times an even polynomial whose coefficients
follow a two-term product formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np
from scipy import integrate
from scipy.linalg import eigh_tridiagonal, solve_banded

from .core import OscillatorParams, QuantumNumbers, effective_params
from .exceptions import ConvergenceError, InvalidParameterError

SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class RadialSolution:
    """``R(rho) = norm * sum_k coeffs[k] rho^(2k) * rho^|l| * exp(-rho^2/4)``."""

    n: int
    l: int
    coeffs: tuple[float, ...]
    norm: float = 1.0

    @property
    def degree(self) -> int:
        return abs(self.l) + 2 * (len(self.coeffs) - 1)

    @property
    def energy(self) -> int:
        """Dimensionless eigenvalue ``n + 1``."""
        return self.n + 1


@dataclass(frozen=True)
class RadialGrid:
    """Uniform cell-centred grid ``rho_j = (j - 1/2) h`` on ``(0, rho_max)``."""

    rho_max: float = 12.0
    points: int = 2400

    def __post_init__(self):
        if not self.rho_max > 0:
            raise InvalidParameterError(f"rho_max must be positive, got {self.rho_max!r}")
        if int(self.points) != self.points or self.points < 16:
            raise InvalidParameterError(f"points must be an integer >= 16, got {self.points!r}")

    @property
    def h(self) -> float:
        return self.rho_max / self.points

    @property
    def nodes(self) -> np.ndarray:
        return self.h * (np.arange(1, self.points + 1) - 0.5)

    def coarsened(self, factor: int) -> RadialGrid:
        if self.points % factor:
            raise InvalidParameterError(
                f"points={self.points} is not divisible by the coarsening factor {factor}"
            )
        return RadialGrid(self.rho_max, self.points // factor)


def _exact_coeffs(n: int, l: int) -> list[Fraction]:
    al = abs(l)
    coeffs = [Fraction(1)]
    for s in range(1, (n - al) // 2 + 1):
        m = 2 * s + al
        coeffs.append(coeffs[-1] * Fraction(n + 2 - m, l * l - m * m))
    return coeffs


def radial_polynomial_coeffs(n: int, l: int) -> RadialSolution:
    QuantumNumbers(n, l)
    return RadialSolution(n, l, tuple(float(c) for c in _exact_coeffs(n, l)))


def _poly_parts(sol: RadialSolution, rho: np.ndarray):
    """``w``, ``w'`` and ``w''`` evaluated from the stored coefficients."""
    al = abs(sol.l)
    w = np.zeros_like(rho)
    dw = np.zeros_like(rho)
    d2w = np.zeros_like(rho)
    for k, c in enumerate(sol.coeffs):
        p = al + 2 * k
        w += c * rho**p
        if p >= 1:
            dw += c * p * rho ** (p - 1)
        if p >= 2:
            d2w += c * p * (p - 1) * rho ** (p - 2)
    return w, dw, d2w


def eval_radial(sol: RadialSolution, rho):
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr < 0):
        raise InvalidParameterError("rho must be non-negative")
    w, _, _ = _poly_parts(sol, np.atleast_1d(rho_arr))
    out = sol.norm * w * np.exp(-0.25 * np.atleast_1d(rho_arr) ** 2)
    return float(out[0]) if rho_arr.ndim == 0 else out.reshape(rho_arr.shape)


def _norm_integral(sol: RadialSolution) -> float:
    bare = replace(sol, norm=1.0)
    value, _ = integrate.quad(
        lambda r: eval_radial(bare, r) ** 2 * r, 0.0, np.inf, epsabs=0.0, epsrel=1e-13, limit=200
    )
    return value


def normalize_radial(sol: RadialSolution) -> RadialSolution:
    """Fix ``norm`` so that ``int_0^inf R^2 rho drho = 1``."""
    return replace(sol, norm=1.0 / math.sqrt(_norm_integral(sol)))


def radial_overlap(a: RadialSolution, b: RadialSolution) -> float:
    value, _ = integrate.quad(
        lambda r: eval_radial(a, r) * eval_radial(b, r) * r, 0.0, np.inf, epsabs=1e-14, epsrel=1e-12, limit=200
    )
    return value


def ode_residual(sol: RadialSolution, rho_samples) -> float:
    """Max residual of the reduced polynomial equation, relative to max |w|.

    The equation is ``-w'' + ((rho^2 - 1)/rho) w' + (l^2/rho^2) w - n w = 0``.
    """
    rho = np.asarray(rho_samples, dtype=float).ravel()
    if rho.size == 0:
        raise InvalidParameterError("need at least one sample")
    if np.any(rho <= 0):
        raise InvalidParameterError("samples must lie in (0, inf); rho = 0 is singular")
    w, dw, d2w = _poly_parts(sol, rho)
    residual = -d2w + (rho**2 - 1.0) / rho * dw + (sol.l**2 / rho**2) * w - sol.n * w
    return float(np.max(np.abs(residual)) / np.max(np.abs(w)))


def azimuthal_eval(l: int, phi):
    """``exp(i l phi) / sqrt(2 pi)``."""
    return np.exp(1j * l * np.asarray(phi)) / SQRT_2PI


def energy_from_dimensionless(params: OscillatorParams, f: float, curly_e: float, l: int) -> float:
    eff = effective_params(params, f)
    return params.hbar * eff.omega_eff * curly_e + 0.5 * f * eff.stiffness * l


# Finite-difference oracle.
#
# Conservative cell-centred discretisation of -(1/rho)(rho R')' with zero flux
# at rho = 0 and a mirrored ghost cell (R = 0) at rho_max.  Scaling by
# sqrt(rho_j) (i.e. working with u = sqrt(rho) R) makes the matrix symmetric
# tridiagonal.


def _fd_operator(l: int, grid: RadialGrid) -> tuple[np.ndarray, np.ndarray]:
    h = grid.h
    r = grid.nodes
    r_out = r + 0.5 * h
    r_in = r - 0.5 * h
    diag = (r_out + r_in) / (r * h * h) + l * l / r**2 + 0.25 * r**2
    diag[-1] += r_out[-1] / (r[-1] * h * h)
    off = -r_out[:-1] / (h * h * np.sqrt(r[:-1] * r[1:]))
    return diag, off


def fd_eigenvalues_raw(l: int, grid: RadialGrid, count: int) -> np.ndarray:
    """Lowest ``count`` eigenvalues on a single grid (second-order accurate)."""
    if count < 1 or count > grid.points:
        raise InvalidParameterError(f"count must lie in [1, {grid.points}], got {count}")
    diag, off = _fd_operator(l, grid)
    return eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, count - 1))


@dataclass(frozen=True)
class FDConvergence:
    """Eigenvalues on grids h, 2h, 4h and their Richardson combination."""

    l: int
    h: float
    fine: np.ndarray
    medium: np.ndarray
    coarse: np.ndarray
    extrapolated: np.ndarray
    observed_order: np.ndarray

    def trace(self) -> list[dict]:
        return [
            {"h": self.h * k, "eigenvalues": v.tolist()}
            for k, v in ((4, self.coarse), (2, self.medium), (1, self.fine))
        ]


def fd_convergence(l: int, grid: RadialGrid, count: int) -> FDConvergence:
    if grid.points % 4 or grid.points < 64:
        raise InvalidParameterError(
            f"refinement needs points divisible by 4 and >= 64, got {grid.points}"
        )
    fine = fd_eigenvalues_raw(l, grid, count)
    medium = fd_eigenvalues_raw(l, grid.coarsened(2), count)
    coarse = fd_eigenvalues_raw(l, grid.coarsened(4), count)
    with np.errstate(divide="ignore", invalid="ignore"):
        order = np.log2(np.abs((coarse - medium) / (medium - fine)))
    return FDConvergence(
        l=l,
        h=grid.h,
        fine=fine,
        medium=medium,
        coarse=coarse,
        extrapolated=(4.0 * fine - medium) / 3.0,
        observed_order=order,
    )


def fd_spectrum(l: int, grid: RadialGrid, count: int, order_window=(1.5, 2.5)) -> list[float]:
    """Lowest ``count`` dimensionless radial eigenvalues for azimuthal number ``l``.

    The grid spacing ``h`` and the coarsened spacing ``2h`` are combined by
    Richardson extrapolation; a third grid at ``4h`` confirms the
    second-order rate.  ``grid.points`` must be divisible by 4.

    Raises
    ------
    ConvergenceError
        If the grid is too coarse for the refinement sequence to behave like
        a second-order scheme.
    """
    conv = fd_convergence(l, grid, count)
    steps = np.abs(conv.medium - conv.fine)
    # rates are only meaningful while the h/2h gap sits well above round-off
    resolved = steps > 1e-9 * np.maximum(1.0, np.abs(conv.fine))
    lo, hi = order_window
    bad = resolved & ~((conv.observed_order >= lo) & (conv.observed_order <= hi))
    if np.any(bad) or np.any(steps > 0.05 * np.maximum(1.0, np.abs(conv.fine))):
        raise ConvergenceError(
            f"fd eigenvalues for l={l} do not converge at second order on h={grid.h:g} "
            f"(observed orders {np.round(conv.observed_order, 3).tolist()}); refine the grid",
            trace=conv.trace(),
        )
    return conv.extrapolated.tolist()


def fd_eigenvector(l: int, grid: RadialGrid, shift: float, iterations: int = 50, tol: float = 1e-13):
    """Inverse iteration on the fd operator near ``shift``.

    Returns ``(eigenvalue, R)`` with ``R`` sampled on ``grid.nodes`` and
    normalised so that ``sum R^2 rho h = 1``.
    """
    diag, off = _fd_operator(l, grid)
    banded = np.zeros((3, grid.points))
    banded[0, 1:] = off
    banded[1] = diag - shift
    banded[2, :-1] = off
    u = np.ones(grid.points) / math.sqrt(grid.points)
    value = shift
    for _ in range(iterations):
        v = solve_banded((1, 1), banded, u)
        v /= np.linalg.norm(v)
        au = diag * v
        au[:-1] += off * v[1:]
        au[1:] += off * v[:-1]
        new_value = float(v @ au)
        done = abs(new_value - value) < tol * max(1.0, abs(new_value))
        u, value = v, new_value
        if done:
            break
    r = grid.nodes
    R = u / np.sqrt(r * grid.h)
    pivot = np.argmax(np.abs(R[: max(1, grid.points // 4)]))
    return value, R * np.sign(R[pivot])


def radial_profile(solutions, rho) -> dict[str, np.ndarray]:
    """Columns ``rho`` and one normalised ``R`` per solution, for CSV export."""
    rho = np.asarray(rho, dtype=float)
    cols = {"rho": rho}
    for sol in solutions:
        cols[f"R_n{sol.n}_l{sol.l}"] = eval_radial(sol, rho)
    return cols
