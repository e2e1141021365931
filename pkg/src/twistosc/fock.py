"""Dense matrix realisation of the model on a truncated two-mode Fock basis.

The basis holds every ``|n_+, n_->`` with ``0 <= n_(+/-) <= cutoff`` and flat
index ``n_+ * (cutoff + 1) + n_-``.  Products of ladder operators are wrong on
the last occupation row/column, so operator identities are compared on the
*interior* (all occupations strictly below the cutoff) where they are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

from .core import OscillatorParams, _occupation, effective_params
from .exceptions import (
    BasisMismatchError,
    InvalidParameterError,
    NotNormalizedError,
    NotSelfAdjointError,
    QuantumNumberError,
)


@dataclass(frozen=True)
class FockBasis:
    cutoff: int

    def __post_init__(self):
        if int(self.cutoff) != self.cutoff or self.cutoff < 1:
            raise InvalidParameterError(f"cutoff must be a positive integer, got {self.cutoff!r}")

    @property
    def dimension(self) -> int:
        return (self.cutoff + 1) ** 2

    def index(self, n_plus: int, n_minus: int) -> int:
        if not (0 <= n_plus <= self.cutoff and 0 <= n_minus <= self.cutoff):
            raise QuantumNumberError(
                f"occupation ({n_plus}, {n_minus}) outside cutoff {self.cutoff}"
            )
        return n_plus * (self.cutoff + 1) + n_minus

    def occupation(self, index: int) -> tuple[int, int]:
        return divmod(index, self.cutoff + 1)

    @cached_property
    def occupations(self) -> np.ndarray:
        """``(dimension, 2)`` array of ``(n_+, n_-)`` per flat index."""
        n = np.arange(self.cutoff + 1)
        return np.stack(np.meshgrid(n, n, indexing="ij"), axis=-1).reshape(-1, 2)

    @cached_property
    def interior(self) -> np.ndarray:
        occ = self.occupations
        return np.flatnonzero((occ < self.cutoff).all(axis=1))

    def shell(self, cap: int) -> np.ndarray:
        return np.flatnonzero(self.occupations.sum(axis=1) <= cap)


@dataclass(eq=False)
class FockOperator:
    basis: FockBasis
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        d = self.basis.dimension
        if self.matrix.shape != (d, d):
            raise BasisMismatchError(
                f"matrix shape {self.matrix.shape} does not match basis dimension {d}"
            )

    def _check(self, other):
        if other.basis != self.basis:
            raise BasisMismatchError(f"basis mismatch: {self.basis} vs {other.basis}")

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            self._check(other)
            return StateVector(self.basis, self.matrix @ other.amplitudes)
        self._check(other)
        return FockOperator(self.basis, self.matrix @ other.matrix, f"{self.label}{other.label}")

    def __add__(self, other):
        self._check(other)
        return FockOperator(self.basis, self.matrix + other.matrix)

    def __sub__(self, other):
        self._check(other)
        return FockOperator(self.basis, self.matrix - other.matrix)

    def __mul__(self, scalar):
        return FockOperator(self.basis, scalar * self.matrix, self.label)

    __rmul__ = __mul__

    def __neg__(self):
        return FockOperator(self.basis, -self.matrix, self.label)

    def dag(self) -> FockOperator:
        return FockOperator(self.basis, self.matrix.conj().T, f"{self.label}^dag")

    def interior(self) -> np.ndarray:
        idx = self.basis.interior
        return self.matrix[np.ix_(idx, idx)]

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))


@dataclass(eq=False)
class StateVector:
    basis: FockBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.basis.dimension,):
            raise BasisMismatchError(
                f"vector length {self.amplitudes.shape} does not match basis dimension "
                f"{self.basis.dimension}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> StateVector:
        return StateVector(self.basis, self.amplitudes / self.norm())

    def amplitude(self, n_plus: int, n_minus: int) -> complex:
        return complex(self.amplitudes[self.basis.index(n_plus, n_minus)])


def ladder_matrices(basis: FockBasis) -> tuple[FockOperator, FockOperator]:
    """Lowering operators ``(a_+, a_-)``; raising operators are their adjoints."""
    single = np.diag(np.sqrt(np.arange(1, basis.cutoff + 1, dtype=float)), 1)
    eye = np.eye(basis.cutoff + 1)
    return (
        FockOperator(basis, np.kron(single, eye), "a+"),
        FockOperator(basis, np.kron(eye, single), "a-"),
    )


@dataclass(eq=False)
class Observables:
    """Operator set at one twist snapshot.

    ``H_xp`` is assembled from position and momentum matrices with the
    Bopp-shifted potential; ``H_ladder`` is the diagonal circular-mode form.
    ``H_bar`` is the undeformed-looking Hamiltonian written in the
    noncommuting coordinates ``xbar``.
    """

    params: OscillatorParams
    f: float
    basis: FockBasis
    a_plus: FockOperator
    a_minus: FockOperator
    N_plus: FockOperator
    N_minus: FockOperator
    x1: FockOperator
    x2: FockOperator
    p1: FockOperator
    p2: FockOperator
    xbar1: FockOperator
    xbar2: FockOperator
    L: FockOperator
    L_xp: FockOperator
    H_xp: FockOperator
    H_bar: FockOperator
    H_ladder: FockOperator

    def hermitian(self) -> dict[str, FockOperator]:
        return {
            name: getattr(self, name)
            for name in ("x1", "x2", "p1", "p2", "xbar1", "xbar2", "L", "L_xp", "H_xp", "H_bar", "H_ladder")
        }


def observable_matrices(params: OscillatorParams, f: float, basis: FockBasis) -> Observables:
    eff = effective_params(params, f)
    hbar, m, w = params.hbar, params.mass, params.omega
    a_p, a_m = ladder_matrices(basis)
    ad_p, ad_m = a_p.dag(), a_m.dag()
    N_p, N_m = ad_p @ a_p, ad_m @ a_m

    # Inverse of a_(+/-) = [(p1 +/- i p2)/s - i s (x1 +/- i x2)] / (2 sqrt(hbar)),
    # s = sqrt(M_f Omega_f):
    #   x1 +/- i x2 = -i sqrt(hbar)/s (a_(-/+)^dag - a_(+/-))
    #   p1 +/- i p2 = s sqrt(hbar) (a_(+/-) + a_(-/+)^dag)
    s = np.sqrt(eff.mass_eff * eff.omega_eff)
    xs = np.sqrt(hbar) / s
    ps = np.sqrt(hbar) * s
    x1 = (-0.5j * xs) * (ad_m - a_p + ad_p - a_m)
    x2 = (-0.5 * xs) * (ad_m - a_p - ad_p + a_m)
    p1 = (0.5 * ps) * (a_p + ad_m + a_m + ad_p)
    p2 = (-0.5j * ps) * (a_p + ad_m - a_m - ad_p)

    shift = f / (2.0 * hbar)
    xbar1 = x1 - shift * p2
    xbar2 = x2 + shift * p1

    L = hbar * (N_m - N_p)
    L_xp = x1 @ p2 - x2 @ p1
    p_sq = p1 @ p1 + p2 @ p2
    H_xp = (
        (0.5 / eff.mass_eff) * p_sq
        + (0.5 * eff.stiffness) * (x1 @ x1 + x2 @ x2)
        - (f * m * w**2 / (2.0 * hbar)) * L_xp
    )
    H_bar = (0.5 / m) * p_sq + (0.5 * m * w**2) * (xbar1 @ xbar1 + xbar2 @ xbar2)
    eye = np.eye(basis.dimension)
    H_ladder = FockOperator(
        basis,
        hbar * eff.omega_plus * (N_p.matrix + 0.5 * eye)
        + hbar * eff.omega_minus * (N_m.matrix + 0.5 * eye),
        "H_ladder",
    )
    for op, name in (
        (x1, "x1"), (x2, "x2"), (p1, "p1"), (p2, "p2"), (xbar1, "xbar1"), (xbar2, "xbar2"),
        (L, "L"), (L_xp, "L_xp"), (H_xp, "H_xp"), (H_bar, "H_bar"), (N_p, "N+"), (N_m, "N-"),
    ):
        op.label = name
    return Observables(
        params, f, basis, a_p, a_m, N_p, N_m, x1, x2, p1, p2, xbar1, xbar2,
        L, L_xp, H_xp, H_bar, H_ladder,
    )


def fock_state(basis: FockBasis, occ) -> StateVector:
    occ = _occupation(occ)
    if occ.n_plus > basis.cutoff or occ.n_minus > basis.cutoff:
        raise QuantumNumberError(f"occupation {occ} exceeds cutoff {basis.cutoff}")
    amps = np.zeros(basis.dimension, dtype=complex)
    amps[basis.index(occ.n_plus, occ.n_minus)] = 1.0
    return StateVector(basis, amps)


def commutator(A: FockOperator, B: FockOperator) -> FockOperator:
    if A.basis != B.basis:
        raise BasisMismatchError(f"basis mismatch: {A.basis} vs {B.basis}")
    return FockOperator(A.basis, A.matrix @ B.matrix - B.matrix @ A.matrix, f"[{A.label},{B.label}]")


def expectation_and_variance(op: FockOperator, state: StateVector, tol: float = 1e-12) -> tuple[complex, float]:
    if op.basis != state.basis:
        raise BasisMismatchError(f"basis mismatch: {op.basis} vs {state.basis}")
    norm = state.norm()
    if abs(norm - 1.0) > tol:
        raise NotNormalizedError(f"state norm {norm!r} differs from 1 by more than {tol}")
    psi = state.amplitudes
    once = op.matrix @ psi
    mean = complex(np.vdot(psi, once))
    second = complex(np.vdot(psi, op.matrix @ once))
    return mean, float((second - mean * mean).real)


def _number_difference(basis: FockBasis) -> np.ndarray:
    occ = basis.occupations
    return (occ[:, 1] - occ[:, 0]).astype(float)


def diagonalize_interior(H: FockOperator, shell_cap: int, degeneracy_tol: float = 1e-9) -> list[tuple[float, StateVector]]:
    """Eigenpairs of ``H`` restricted to shells ``n_+ + n_- <= shell_cap``.

    Degenerate eigenvalues are resolved into angular-momentum eigenvectors
    and ordered by ascending ``<n_- - n_+>``, so the output is deterministic.
    """
    basis = H.basis
    if shell_cap < 0 or 2 * shell_cap > basis.cutoff:
        raise InvalidParameterError(
            f"shell_cap {shell_cap} must satisfy 0 <= shell_cap <= cutoff/2 = {basis.cutoff / 2}"
        )
    scale = max(1.0, float(np.max(np.abs(H.matrix))))
    defect = H.hermiticity_defect()
    if defect > 1e-12 * scale:
        raise NotSelfAdjointError(f"operator {H.label!r} is not self-adjoint (defect {defect:.3e})")

    idx = basis.shell(shell_cap)
    block = H.matrix[np.ix_(idx, idx)]
    values, vectors = scipy.linalg.eigh(0.5 * (block + block.conj().T))
    lz = _number_difference(basis)[idx]

    out = []
    start = 0
    while start < len(values):
        stop = start + 1
        while stop < len(values) and values[stop] - values[start] <= degeneracy_tol * scale:
            stop += 1
        V = vectors[:, start:stop]
        if stop - start > 1:
            _, W = scipy.linalg.eigh(V.conj().T @ (lz[:, None] * V))
            V = V @ W
        cluster = []
        for k in range(V.shape[1]):
            v = V[:, k]
            pivot = np.argmax(np.abs(v))
            v = v * (abs(v[pivot]) / v[pivot])
            full = np.zeros(basis.dimension, dtype=complex)
            full[idx] = v
            lz_mean = float(np.real(np.vdot(v, lz * v)))
            cluster.append((lz_mean, float(values[start + k]), StateVector(basis, full)))
        cluster.sort(key=lambda item: item[0])
        out.extend((value, state) for _, value, state in cluster)
        start = stop
    return out
