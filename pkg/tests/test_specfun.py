import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gammacm import specfun
from gammacm.errors import DomainError

REL = 1e-14


def close(a, b, rel):
    return abs(a - b) <= rel * max(abs(b), 1e-300)


def test_gamma_q_reference_values(frozen):
    for x, q, want in frozen["gamma_q"]:
        assert close(specfun.gamma_q(x, q), want, 1e-12), (x, q)


def test_gamma_q_integer_points_are_exact():
    assert specfun.gamma_q(1, 0.5) == 1.0
    assert specfun.gamma_q(2, 0.5) == 1.0
    assert specfun.gamma_q(3, 0.5) == 1.5


def test_digamma_q_reference_values(frozen):
    for x, q, want in frozen["digamma_q"] + frozen["digamma_q_from_qgamma"]:
        assert close(specfun.digamma_q(x, q), want, 1e-11), (x, q)


def test_polygamma_q_reference_values(frozen):
    for k, x, q, want in frozen["polygamma_q"]:
        assert close(specfun.polygamma_q(k, x, q), want, 1e-11), (k, x, q)


def test_classical_digamma_and_polygamma(frozen):
    for x, want in frozen["digamma"]:
        assert close(specfun.digamma(x), want, 1e-14), x
    for k, x, want in frozen["polygamma"]:
        assert close(specfun.polygamma(k, x), want, 1e-13), (k, x)


def test_trigamma_one_matches_quadrature(frozen):
    assert close(specfun.polygamma(1, 1.0), frozen["trigamma_1_quadrature"], 1e-14)
    assert close(specfun.polygamma(1, 1.0), math.pi**2 / 6, 1e-15)


def test_digamma_against_scipy():
    """A second implementation, used only as a cross-check."""
    sp = pytest.importorskip("scipy.special")
    xs = np.geomspace(1e-3, 1e4, 300)
    np.testing.assert_allclose(specfun.digamma(xs), sp.digamma(xs), rtol=1e-13, atol=1e-14)
    for k in (1, 2, 4):
        np.testing.assert_allclose(specfun.polygamma(k, xs), sp.polygamma(k, xs), rtol=1e-12)


def test_q_close_to_one_approaches_classical(frozen):
    x, q, want = frozen["digamma_q"][-1]
    got = specfun.digamma_q(x, q)
    assert close(got, want, 1e-10)
    assert abs(got - specfun.digamma(2.0)) < 1e-4


def test_vectorized_matches_scalar():
    xs = np.array([0.3, 1.0, 2.5, 9.0])
    vec = specfun.digamma_q(xs, 0.7)
    assert vec.shape == xs.shape
    for x, v in zip(xs, vec):
        assert v == pytest.approx(specfun.digamma_q(float(x), 0.7), rel=1e-15)


def test_phi_values(frozen):
    for d, g, t, want in frozen["phi"]:
        assert close(specfun.phi(d, g, t), want, 1e-12), (d, g, t)


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.5])
def test_bad_q_rejected(bad):
    with pytest.raises(DomainError):
        specfun.gamma_q(1.0, bad)


def test_nonpositive_x_rejected():
    with pytest.raises(DomainError):
        specfun.digamma_q(0.0, 0.5)
    with pytest.raises(DomainError):
        specfun.digamma(-1.0)
    with pytest.raises(DomainError):
        specfun.phi(1.0, 1.0, -1.0)


def test_log_bernoulli_gf_continuity():
    z = np.array([0.0, 1e-8, 0.0499999, 0.05, 0.05000001, 2.0])
    ref = [0.0] + [math.log(v / -math.expm1(-v)) for v in z[1:]]
    np.testing.assert_allclose(specfun.log_bernoulli_gf(z), ref, rtol=1e-12, atol=1e-16)


xs = st.floats(0.01, 10.0)
qs = st.floats(0.05, 0.95)


@given(xs, qs)
def test_functional_equation(x, q):
    g1 = specfun.gamma_q(x + 1, q)
    g0 = specfun.gamma_q(x, q)
    assert abs(g1 - (1 - q**x) / (1 - q) * g0) <= 10 * REL * g1


@given(st.floats(0.2, 10.0), qs)
def test_digamma_is_log_derivative(x, q):
    h = 1e-5
    num = (specfun.log_gamma_q(x + h, q) - specfun.log_gamma_q(x - h, q)) / (2 * h)
    assert num == pytest.approx(specfun.digamma_q(x, q), abs=1e-6, rel=1e-6)


@given(st.floats(0.05, 10.0), qs)
def test_two_series_forms_agree(x, q):
    a = specfun.digamma_q_first_series(x, q)
    b = specfun.digamma_q_lambert(x, q)
    c = specfun.digamma_q(x, q)
    scale = max(abs(a), 1.0)
    assert abs(a - b) <= 10 * REL * scale
    assert abs(a - c) <= 10 * REL * scale


@given(st.integers(1, 4), st.floats(0.05, 10.0), st.floats(0.05, 0.9))
def test_polygamma_forms_agree(k, x, q):
    a = specfun.polygamma_q(k, x, q)
    b = specfun.polygamma_q_lambert(k, x, q)
    assert a == pytest.approx(b, rel=1e-11, abs=1e-13)


@given(st.floats(0.05, 5.0), st.floats(0.05, 5.0))
def test_phi_decreasing_and_midpoint_convex(g, extra):
    d = g + extra
    t = np.linspace(0.0, 50.0, 2001)
    v = specfun.phi(d, g, t)
    assert np.all(np.diff(v) <= 1e-12)
    second = v[:-2] - 2 * v[1:-1] + v[2:]
    assert second.min() >= -1e-12


@given(st.floats(0.05, 20.0), st.floats(0.0, 40.0))
def test_phi_scaling_identity(g, t):
    lhs = specfun.phi(g, g, t)
    rhs = specfun.phi(1.0, 1.0, g * t) / g
    assert lhs == pytest.approx(rhs, rel=10 * REL, abs=1e-300)
