import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistosc.core import (
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
from twistosc.exceptions import InvalidParameterError, QuantumNumberError

UNIT = OscillatorParams()
R2 = math.sqrt(2.0)

positive = st.floats(min_value=0.05, max_value=20.0)
twist_values = st.floats(min_value=-1e3, max_value=1e3)


def test_undeformed_limit():
    eff = effective_params(UNIT, 0.0)
    assert (eff.mass_eff, eff.omega_eff, eff.omega_plus, eff.omega_minus) == (1.0, 1.0, 1.0, 1.0)


def test_effective_params_f2():
    eff = effective_params(UNIT, 2.0)
    assert eff.mass_eff == pytest.approx(0.5, rel=1e-15)
    assert eff.omega_eff == pytest.approx(R2, rel=1e-15)
    assert eff.omega_plus == pytest.approx(R2 - 1, rel=1e-15)
    assert eff.omega_minus == pytest.approx(R2 + 1, rel=1e-15)


@pytest.mark.parametrize("occ, expected", [((0, 0), R2), ((1, 0), 2 * R2 - 1), ((0, 1), 2 * R2 + 1)])
def test_energy_modes_f2(occ, expected):
    assert energy_modes(UNIT, 2.0, occ) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("a, b", [(0, 0), (2, 5), (7, 1)])
def test_isotropic_energies(a, b):
    assert energy_modes(UNIT, 0.0, ModeOccupation(a, b)) == a + b + 1


def test_energy_nl_matches_modes_example():
    assert energy_nl(UNIT, 2.0, QuantumNumbers(1, -1)) == pytest.approx(2 * R2 - 1, rel=1e-14)
    assert energy_nl(UNIT, 2.0, (1, -1)) == pytest.approx(energy_modes(UNIT, 2.0, (1, 0)), rel=1e-14)


def test_energy_nl_degenerate_at_zero_twist():
    assert {energy_nl(UNIT, 0.0, (3, l)) for l in (-3, -1, 1, 3)} == {4.0}


@pytest.mark.parametrize("n, l", [(1, 0), (2, 1), (2, 4), (-1, -1), (3, -5)])
def test_invalid_quantum_numbers(n, l):
    with pytest.raises(QuantumNumberError):
        energy_nl(UNIT, 0.0, (n, l))


def test_invalid_occupation():
    with pytest.raises(QuantumNumberError):
        ModeOccupation(-1, 0)


@pytest.mark.parametrize("field", ["mass", "omega", "hbar"])
@pytest.mark.parametrize("value", [0.0, -1.0, float("inf")])
def test_params_must_be_positive(field, value):
    with pytest.raises(InvalidParameterError):
        OscillatorParams(**{field: value})


def test_allowed_azimuthal():
    assert allowed_azimuthal(0) == [0]
    assert allowed_azimuthal(2) == [-2, 0, 2]
    assert allowed_azimuthal(3) == [-3, -1, 1, 3]


def test_uncertainty_products():
    assert eigenstate_uncertainty_product(UNIT, (0, 0)) == 0.25
    assert eigenstate_uncertainty_product(UNIT, (1, 1)) == 2.25
    assert eigenstate_uncertainty_product(OscillatorParams(hbar=2.0), (0, 0)) == 1.0


def test_angular_momentum_eigenvalues():
    assert angular_momentum_eigenvalue(OscillatorParams(hbar=0.7), (0, 1)) == 0.7
    assert angular_momentum_eigenvalue(UNIT, (2, 2)) == 0
    assert angular_momentum_eigenvalue(UNIT, (3, 0)) == -3


def test_labelings_convert():
    qn = ModeOccupation(2, 5).to_quantum_numbers()
    assert (qn.n, qn.l) == (7, 3)
    assert qn.to_occupation() == ModeOccupation(2, 5)


@settings(max_examples=300, deadline=None)
@given(m=positive, w=positive, hbar=positive, f=twist_values)
def test_effective_param_invariants(m, w, hbar, f):
    p = OscillatorParams(m, w, hbar)
    eff = effective_params(p, f)
    assert eff.omega_plus > 0 and eff.omega_minus > 0
    assert eff.stiffness == pytest.approx(m * w**2, rel=1e-14)
    assert eff.omega_plus * eff.omega_minus == pytest.approx(w**2, rel=1e-14)
    assert eff.omega_plus + eff.omega_minus == pytest.approx(2 * eff.omega_eff, rel=1e-14)


@settings(max_examples=300, deadline=None)
@given(m=positive, w=positive, hbar=positive, f=st.floats(-50, 50),
       n=st.integers(0, 10), data=st.data())
def test_spectrum_labelings_agree(m, w, hbar, f, n, data):
    p = OscillatorParams(m, w, hbar)
    l = data.draw(st.sampled_from(allowed_azimuthal(n)))
    a = energy_nl(p, f, (n, l))
    b = energy_modes(p, f, ((n - l) // 2, (n + l) // 2))
    assert a == pytest.approx(b, rel=1e-14)


@settings(max_examples=200, deadline=None)
@given(m=positive, w=positive, hbar=positive, f=st.floats(0.0, 100.0))
def test_split_between_first_excited_states(m, w, hbar, f):
    p = OscillatorParams(m, w, hbar)
    upper = energy_modes(p, f, (0, 1))
    split = upper - energy_modes(p, f, (1, 0))
    # difference of two energies: round-off is set by the energy scale
    assert split == pytest.approx(f * m * w**2, rel=1e-12, abs=1e-14 * upper)


@given(n=st.integers(0, 60))
def test_allowed_azimuthal_shape(n):
    ls = allowed_azimuthal(n)
    assert len(ls) == n + 1
    assert sorted(-l for l in ls) == ls
