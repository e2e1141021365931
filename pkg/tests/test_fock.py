import math

import numpy as np
import pytest

from twistosc.core import OscillatorParams, eigenstate_uncertainty_product, energy_modes, energy_nl
from twistosc.exceptions import BasisMismatchError, NotNormalizedError, NotSelfAdjointError, QuantumNumberError
from twistosc.fock import (
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
from twistosc.verify import algebra_deviations, hamiltonian_deviations

UNIT = OscillatorParams()
R2 = math.sqrt(2.0)


@pytest.fixture(scope="module")
def basis():
    return FockBasis(12)


@pytest.fixture(scope="module")
def ops_f2(basis):
    return observable_matrices(UNIT, 2.0, basis)


@pytest.fixture(scope="module")
def random_ops():
    rng = np.random.default_rng(7)
    out = []
    for _ in range(5):
        m, w, hbar = rng.uniform(0.3, 3.0, size=3)
        f = rng.uniform(-4.0, 4.0)
        out.append(observable_matrices(OscillatorParams(m, w, hbar), f, FockBasis(8)))
    return out


def test_basis_index_is_bijective(basis):
    seen = {basis.index(a, b) for a in range(13) for b in range(13)}
    assert seen == set(range(basis.dimension))
    assert all(basis.occupation(basis.index(a, b)) == (a, b) for a in range(13) for b in range(13))
    assert basis.index(2, 3) == 2 * 13 + 3


def test_vacuum_annihilated(basis):
    a_p, a_m = ladder_matrices(basis)
    vac = fock_state(basis, (0, 0))
    assert np.all((a_p @ vac).amplitudes == 0)
    assert np.all((a_m @ vac).amplitudes == 0)


def test_number_operator(basis):
    a_p, _ = ladder_matrices(basis)
    s = fock_state(basis, (2, 3))
    np.testing.assert_allclose((a_p.dag() @ a_p @ s).amplitudes, 2 * s.amplitudes, atol=1e-14)


def test_lowering_action(basis):
    a_p, a_m = ladder_matrices(basis)
    s = fock_state(basis, (4, 5))
    np.testing.assert_allclose((a_p @ s).amplitudes, 2.0 * fock_state(basis, (3, 5)).amplitudes, atol=1e-14)
    np.testing.assert_allclose((a_m @ s).amplitudes, math.sqrt(5) * fock_state(basis, (4, 4)).amplitudes, atol=1e-14)


def test_ladder_algebra_on_interior(ops_f2):
    dev = algebra_deviations(ops_f2)
    assert max(dev.values()) < 1e-12


def test_commutator_edge_is_not_identity(basis):
    # the cutoff row breaks [a, a^dag] = 1; this is why checks use the interior
    a_p, _ = ladder_matrices(basis)
    full = commutator(a_p, a_p.dag()).matrix
    assert abs(full[basis.index(12, 0), basis.index(12, 0)] - 1.0) > 1.0


def test_commutator_self_is_zero(ops_f2):
    assert np.all(commutator(ops_f2.x1, ops_f2.x1).matrix == 0)


def test_commutator_basis_mismatch():
    a, _ = ladder_matrices(FockBasis(3))
    b, _ = ladder_matrices(FockBasis(4))
    with pytest.raises(BasisMismatchError):
        commutator(a, b)


def test_H_ladder_commutes_with_L(ops_f2):
    assert np.all(commutator(ops_f2.H_ladder, ops_f2.L).matrix == 0)


def test_noncommutative_coordinates(ops_f2):
    c = commutator(ops_f2.xbar1, ops_f2.xbar2).interior()
    np.testing.assert_allclose(c, 2.0j * np.eye(len(c)), atol=1e-12)


def test_operators_self_adjoint(ops_f2):
    assert max(op.hermiticity_defect() for op in ops_f2.hermitian().values()) < 1e-12


def test_random_draws_algebra(random_ops):
    for ops in random_ops:
        assert max(algebra_deviations(ops).values()) < 1e-12
        dev = hamiltonian_deviations(ops)
        assert dev["L = x1 p2 - x2 p1"] < 1e-12
        assert dev["H_xp = H_bar (noncommutative form)"] < 1e-12


def test_xp_hamiltonian_differs_from_ladder_form_by_L_term(random_ops):
    """The position-momentum Hamiltonian and the circular-mode form differ by exactly
    -(f m omega^2 / hbar) L: the split frequencies enter with opposite signs."""
    for ops in random_ops:
        assert hamiltonian_deviations(ops)["H_xp - H_ladder = -(f m omega^2 / hbar) L"] < 1e-12


def test_xp_eigenvectors_carry_opposite_l_label(ops_f2):
    # Eigenvector of H_xp with <L> = hbar*l sits at the closed-form energy of (n, -l).
    for value, state in diagonalize_interior(ops_f2.H_xp, 3):
        mean_L, var_L = expectation_and_variance(ops_f2.L, state)
        mean_N, _ = expectation_and_variance(ops_f2.N_plus + ops_f2.N_minus, state)
        n, l = round(mean_N.real), round(mean_L.real)
        assert var_L < 1e-10
        assert value == pytest.approx(energy_nl(UNIT, 2.0, (n, -l)), rel=1e-10)


def test_fock_state_matches_repeated_raising(basis):
    a_p, a_m = ladder_matrices(basis)
    for occ in [(0, 0), (1, 0), (2, 3), (5, 1)]:
        s = fock_state(basis, (0, 0))
        for _ in range(occ[0]):
            s = a_p.dag() @ s
        for _ in range(occ[1]):
            s = a_m.dag() @ s
        s = StateVector(basis, s.amplitudes / math.sqrt(math.factorial(occ[0]) * math.factorial(occ[1])))
        np.testing.assert_allclose(s.amplitudes, fock_state(basis, occ).amplitudes, atol=1e-12)


def test_fock_state_out_of_range(basis):
    with pytest.raises(QuantumNumberError):
        fock_state(basis, (13, 0))


def test_fock_state_eigen_relations(basis, ops_f2):
    s = fock_state(basis, (1, 0))
    res = (ops_f2.H_ladder @ s).amplitudes - energy_modes(UNIT, 2.0, (1, 0)) * s.amplitudes
    assert np.linalg.norm(res) < 1e-12
    s = fock_state(basis, (0, 1))
    assert np.linalg.norm((ops_f2.L @ s).amplitudes - s.amplitudes) < 1e-12


def test_expectation_and_variance_eigenstate(basis, ops_f2):
    mean, var = expectation_and_variance(ops_f2.N_plus, fock_state(basis, (3, 1)))
    assert mean == pytest.approx(3.0, abs=1e-14)
    assert var == pytest.approx(0.0, abs=1e-13)


def test_expectation_rejects_unnormalised(basis, ops_f2):
    s = StateVector(basis, 2 * fock_state(basis, (0, 0)).amplitudes)
    with pytest.raises(NotNormalizedError):
        expectation_and_variance(ops_f2.L, s)


@pytest.mark.parametrize("hbar", [1.0, 0.4])
def test_eigenstate_uncertainty_from_matrices(hbar):
    p = OscillatorParams(1.3, 0.8, hbar)
    b = FockBasis(8)
    ops = observable_matrices(p, 1.1, b)
    for n in range(5):
        for a in range(n + 1):
            s = fock_state(b, (a, n - a))
            for x, pm in ((ops.x1, ops.p1), (ops.x2, ops.p2)):
                _, vx = expectation_and_variance(x, s)
                _, vp = expectation_and_variance(pm, s)
                assert vx * vp == pytest.approx(eigenstate_uncertainty_product(p, (a, n - a)), rel=1e-10)


def test_diagonalize_undeformed():
    ops = observable_matrices(UNIT, 0.0, FockBasis(6))
    values = [v for v, _ in diagonalize_interior(ops.H_xp, 2)]
    np.testing.assert_allclose(values, [1, 2, 2, 3, 3, 3], rtol=1e-10)


def test_diagonalize_deformed_shell_one(ops_f2):
    for H in (ops_f2.H_ladder, ops_f2.H_xp):
        values = [v for v, _ in diagonalize_interior(H, 1)]
        np.testing.assert_allclose(values, [R2, 2 * R2 - 1, 2 * R2 + 1], rtol=1e-10)


def test_degenerate_levels_resolved_by_L():
    ops = observable_matrices(UNIT, 0.0, FockBasis(8))
    pairs = diagonalize_interior(ops.H_xp, 4)
    levels = {}
    for value, state in pairs:
        mean_L, var_L = expectation_and_variance(ops.L, state)
        assert var_L < 1e-10
        levels.setdefault(round(value), []).append(mean_L.real)
    for n in range(5):
        assert len(levels[n + 1]) == n + 1
        np.testing.assert_allclose(levels[n + 1], list(range(-n, n + 1, 2)), atol=1e-10)


def test_diagonalize_rejects_non_hermitian(basis):
    a_p, _ = ladder_matrices(basis)
    with pytest.raises(NotSelfAdjointError):
        diagonalize_interior(a_p, 2)


def test_diagonalize_shell_cap_limit(ops_f2):
    with pytest.raises(ValueError):
        diagonalize_interior(ops_f2.H_ladder, 7)


def test_operator_shape_checked(basis):
    with pytest.raises(BasisMismatchError):
        FockOperator(basis, np.eye(3))
