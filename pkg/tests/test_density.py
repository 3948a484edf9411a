"""Density profiles: closed forms, validation, conjugation, Wirtinger calculus."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import holomeans as hm
from holomeans.errors import DegenerateDensityError, InvalidParameterError

POWERS = (1.5, 2.0, 3.0, 4.0)


@pytest.mark.parametrize("p", POWERS)
def test_power_closed_forms(p):
    d = hm.power_density(p)
    s = np.array([0.25, 1.0, 2.0, 7.5])
    np.testing.assert_allclose(d.value_fn(s), s**p / p, rtol=1e-14)
    np.testing.assert_allclose(d.deriv_fn(s), s ** (p - 1), rtol=1e-14)
    np.testing.assert_allclose(d.second_deriv_fn(s), (p - 1) * s ** (p - 2), rtol=1e-14)


@pytest.mark.parametrize("p", POWERS)
def test_power_convexity_ratio_is_constant(p):
    d = hm.power_density(p)
    assert d.lambda_lo == pytest.approx(p - 1)
    assert d.lambda_hi == pytest.approx(p - 1)
    for s in (1e-3, 0.5, 1.0, 40.0):
        assert hm.lambda_of(d, s) == pytest.approx(p - 1, rel=1e-13)


@pytest.mark.parametrize("p", POWERS)
def test_power_mu_matches_exponent_formula(p):
    d = hm.power_density(p)
    for s in (1e-2, 0.3, 1.0, 9.0):
        assert hm.mu_of(d, s) == pytest.approx((p - 2) / p, rel=1e-13)


@pytest.mark.parametrize("p", (1.0, 0.5, 0.0, -2.0))
def test_power_rejects_degenerate_exponent(p):
    with pytest.raises(InvalidParameterError):
        hm.power_density(p)


@pytest.mark.parametrize("p", POWERS)
def test_validate_density_passes_for_powers(p):
    report = hm.validate_density(hm.power_density(p))
    assert report.ok
    assert all(c.passed for c in report.checks)


def test_validate_density_flags_nonconvex_profile():
    d = hm.power_density(2)
    bad = hm.Density(
        value_fn=lambda s: np.sin(s),
        deriv_fn=lambda s: np.cos(s),
        second_deriv_fn=lambda s: -np.sin(s),
        lambda_lo=d.lambda_lo,
        lambda_hi=d.lambda_hi,
        small_exponent=d.small_exponent,
        small_coeff=d.small_coeff,
        label="sin",
    )
    report = hm.validate_density(bad)
    assert not report.ok


@pytest.mark.parametrize("p", POWERS)
def test_young_conjugate_inverts_derivative(p):
    d = hm.power_density(p)
    g = hm.young_conjugate(d)
    s = np.array([1e-4, 1e-2, 0.5, 1.0, 3.0, 1e3])
    round_trip = g.deriv_fn(d.deriv_fn(s))
    assert np.all(np.abs(round_trip - s) <= 1e-10 * (1.0 + s))
    # pinching bounds invert
    assert g.lambda_lo == pytest.approx(1.0 / d.lambda_hi, rel=1e-12)
    assert g.lambda_hi == pytest.approx(1.0 / d.lambda_lo, rel=1e-12)


@pytest.mark.parametrize("p", POWERS)
def test_young_conjugate_is_power_dual(p):
    # for F = s^p / p the conjugate is t^q / q with 1/p + 1/q = 1
    q = p / (p - 1)
    g = hm.young_conjugate(hm.power_density(p))
    t = np.array([0.3, 1.0, 2.5])
    np.testing.assert_allclose(g.value_fn(t), t**q / q, rtol=1e-9, atol=1e-12)


def test_young_conjugate_refuses_flat_derivative():
    d = hm.power_density(2)
    flat = hm.Density(
        value_fn=lambda s: np.ones_like(s),
        deriv_fn=lambda s: np.zeros_like(s),
        second_deriv_fn=lambda s: np.zeros_like(s),
        lambda_lo=d.lambda_lo,
        lambda_hi=d.lambda_hi,
        small_exponent=d.small_exponent,
        small_coeff=d.small_coeff,
        label="flat",
    )
    with pytest.raises(DegenerateDensityError):
        hm.young_conjugate(flat)


@pytest.mark.parametrize("p", (2.0, 3.0))
def test_complex_hessian_closed_form(p):
    # W(w) = F(|w|) = |w|^p / p has dW/d(conj w) = |w|^(p-2) w / 2
    d = hm.power_density(p)
    for w in (0.7 + 0.2j, -1.1 + 0.9j, 2.0 - 0.5j):
        h = hm.complex_hessian(d, w)
        expected = abs(w) ** (p - 2) * w / 2.0
        assert h.d_wbar == pytest.approx(expected, rel=1e-12)


@given(
    re=st.floats(-2.0, 2.0),
    im=st.floats(-2.0, 2.0),
    p=st.sampled_from(POWERS),
)
def test_complex_hessian_matches_finite_differences(re, im, p):
    w = complex(re, im)
    if abs(w) < 0.3:
        return
    d = hm.power_density(p)
    h = hm.complex_hessian(d, w)

    def dwbar(w):
        return hm.complex_hessian(d, w).d_wbar

    eps = 1e-6 * (1.0 + abs(w))
    fx = (dwbar(w + eps) - dwbar(w - eps)) / (2.0 * eps)
    fy = (dwbar(w + 1j * eps) - dwbar(w - 1j * eps)) / (2.0 * eps)
    dw = (fx - 1j * fy) / 2.0
    dwbar2 = (fx + 1j * fy) / 2.0
    scale = abs(w) ** (p - 2)
    assert abs(h.d_wbar_w - dw) <= 2e-4 * scale
    assert abs(h.d_wbar_wbar - dwbar2) <= 2e-4 * scale
