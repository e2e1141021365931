import math

import pytest

from twistosc.exceptions import InvalidParameterError
from twistosc.twist import Family, eval_twist, make_twist, parse_twist


def test_zero_kappa_constant_is_zero():
    tf = make_twist("constant", 0.0)
    assert all(tf(t) == 0.0 for t in (-3.0, 0.0, 1.5, 1e6))


def test_sin_family():
    tf = make_twist(Family.SIN, 2.0, 1.0)
    for t in (0.0, 0.3, 1.0, 4.0):
        assert tf(t) == pytest.approx(2.0 * math.sin(t), abs=1e-15)


def test_sinh_value_against_exponential_form():
    tf = make_twist("sinh", 0.5, 2.0)
    expected = 0.5 * (math.exp(0.5) - math.exp(-0.5)) / 2.0
    assert eval_twist(tf, 1.0) == pytest.approx(expected, rel=1e-15)
    assert eval_twist(tf, 1.0) == pytest.approx(0.2605476527468737, rel=1e-12)


@pytest.mark.parametrize(
    "family, t, expected",
    [("constant", 7.0, 0.25), ("sin", 0.0, 0.0), ("cosh", 0.0, 1.0), ("cos", 0.0, 1.0), ("sinh", 0.0, 0.0)],
)
def test_simple_values(family, t, expected):
    kappa = 0.25 if family == "constant" else 1.0
    assert eval_twist(make_twist(family, kappa, 1.0), t) == expected


def test_sin_periodicity():
    tf = make_twist("sin", 1.7, 0.8)
    period = 2 * math.pi * tf.tau
    for t in (-1.0, 0.0, 0.4, 3.3):
        assert tf(t + period) == pytest.approx(tf(t), abs=1e-14)


@pytest.mark.parametrize("family", ["sin", "cos", "sinh", "cosh"])
def test_zero_kappa_vanishes_everywhere(family):
    tf = make_twist(family, 0.0, 2.0)
    assert all(tf(t) == 0.0 for t in (0.0, 1.0, -5.0))


@pytest.mark.parametrize("tau", [0.0, -1.0, float("nan")])
def test_time_dependent_family_needs_positive_tau(tau):
    with pytest.raises(InvalidParameterError):
        make_twist("sin", 1.0, tau)


def test_constant_ignores_tau():
    assert make_twist("constant", 3.0, -2.0)(10.0) == 3.0


def test_hyperbolic_overflow_is_a_range_error():
    with pytest.raises(OverflowError):
        make_twist("cosh", 1.0, 1.0)(1e4)


def test_parse_round_trip():
    tf = parse_twist("family=sin,kappa=2.0,tau=1.0")
    assert tf == make_twist("sin", 2.0, 1.0)
    assert parse_twist(tf.to_spec()) == tf
    assert parse_twist("family=constant,kappa=0.5").to_dict() == {"family": "constant", "kappa": 0.5}


@pytest.mark.parametrize("text", ["kappa=1", "family=tan,kappa=1", "family=sin,kappa=x,tau=1", "family", "family=sin,kappa=1,tau=1,foo=2"])
def test_parse_rejects_bad_specs(text):
    with pytest.raises(InvalidParameterError):
        parse_twist(text)
