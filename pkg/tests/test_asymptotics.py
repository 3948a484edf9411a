"""Radius sweeps, extrapolation to radius zero, and the three verdicts."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import holomeans as hm
from holomeans.errors import InsufficientDataError, InvalidParameterError

D2 = hm.power_density(2)
D3 = hm.power_density(3)


def test_default_ladder_is_geometric():
    cfg = hm.SweepConfig()
    radii = cfg.radii()
    np.testing.assert_allclose(radii, 0.1 * 0.5 ** np.arange(8), rtol=1e-15)


def test_sweep_config_validation():
    # the ladder parameters are validated where they are consumed
    with pytest.raises(InvalidParameterError):
        hm.SweepConfig(r0=0.0).radii()
    with pytest.raises(InvalidParameterError):
        hm.SweepConfig(rho=1.0).radii()
    with pytest.raises(InvalidParameterError):
        hm.SweepConfig(count=1).radii()
    with pytest.raises(InvalidParameterError):
        hm.sweep("variational", np.exp, 0j, D2, hm.SweepConfig(min_successes=0))


def test_extrapolate_exact_linear_series():
    radii = hm.SweepConfig().radii()
    limit, slope = 0.3 - 0.2j, 1.5 + 0.7j
    values = limit + slope * radii
    est = hm.extrapolate(radii, values)
    assert abs(est.limit - limit) <= 1e-12
    assert abs(est.slope - slope) <= 1e-10
    assert est.fit_residual <= 1e-12
    assert est.verdict == "converges_nonzero"


def test_extrapolate_vanishing_series():
    radii = hm.SweepConfig().radii()
    est = hm.extrapolate(radii, (2.0 - 1.0j) * radii)
    assert abs(est.limit) <= 1e-12
    assert est.verdict == "vanishes"


@given(
    c2re=st.floats(0.1, 5.0),
    c2im=st.floats(-5.0, 5.0),
    lre=st.floats(-2.0, 2.0),
    lim=st.floats(-2.0, 2.0),
)
def test_extrapolation_soundness_on_quadratic_series(c2re, c2im, lre, lim):
    # intercept error of the linear fit on L + c2 r^2 stays below 2e-2 |c2|
    radii = hm.SweepConfig().radii()
    c2 = complex(c2re, c2im)
    limit = complex(lre, lim)
    est = hm.extrapolate(radii, limit + c2 * radii**2)
    assert abs(est.limit - limit) <= 2e-2 * abs(c2)


def test_extrapolate_flags_noisy_series_inconclusive():
    radii = hm.SweepConfig().radii()
    rng = np.random.default_rng(5)
    noise = rng.standard_normal(radii.size) + 1j * rng.standard_normal(radii.size)
    est = hm.extrapolate(radii, 0.2 + 3.0 * noise)
    assert est.verdict == "inconclusive"


def test_extrapolate_needs_two_radii():
    with pytest.raises(hm.InvalidSweepError):
        hm.extrapolate(np.array([0.1]), np.array([1.0 + 0j]))


def test_sweep_runs_all_radii_and_records_extras():
    sw = hm.sweep("variational", np.exp, 0.4 + 0.1j, D2)
    assert sw.kind == "variational"
    assert len(sw.radii) == 8
    assert not sw.failures
    assert all(s == "converged" for s in sw.statuses)
    assert all("foc_residual" in e for e in sw.extras)


def test_sweep_rejects_unknown_kind():
    with pytest.raises(InvalidParameterError):
        hm.sweep("bogus", np.exp, 0j, D2)


def test_sweep_infinity_records_support_counts():
    sw = hm.sweep("infinity", lambda z: z**2 + 0.4 * np.conj(z), 0.3 + 0.3j, None)
    assert all(e.get("support_count", 0) >= 2 for e in sw.extras)


def test_sweep_skips_failing_radii_and_raises_when_starved():
    def bad(zeta):
        zeta = np.asarray(zeta, dtype=complex)
        out = np.exp(zeta).astype(complex)
        return np.where(np.abs(zeta - 0.5) < 0.06, np.nan, out)

    # every ladder radius except the largest two dips into the bad annulus
    with pytest.raises(InsufficientDataError):
        hm.sweep("variational", bad, 0.5 + 0j, D2)


def test_extrapolate_accepts_sweep_object():
    sw = hm.sweep("variational", np.exp, 0.4 + 0.1j, D2)
    est1 = hm.extrapolate(sw)
    est2 = hm.extrapolate(np.asarray(sw.radii), np.asarray(sw.values))
    assert est1.limit == est2.limit


@pytest.mark.parametrize("p", (1.5, 2.0, 3.0))
def test_holomorphy_verdict_accepts_entire_functions(p):
    d = hm.power_density(p)
    pts = [0.4 + 0.1j, -0.3 + 0.5j]
    rows = hm.holomorphy_verdict(np.exp, pts, d)
    assert len(rows) == 2
    for row in rows:
        assert row.verdict == "holomorphic"
        assert row.consistent
        assert abs(row.estimate.limit) <= 1e-4


def test_holomorphy_verdict_rejects_antiholomorphic_field():
    rows = hm.holomorphy_verdict(np.conj, 0.5 + 0.5j, D2)
    (row,) = rows
    assert row.verdict == "not_holomorphic"
    # the conjugate-transform limit for conj at p = 2 is exactly 1
    assert abs(row.estimate.limit - 1.0) <= 1e-3
    assert abs(row.predicted_limit - 1.0) <= 1e-12
    assert row.consistent


def test_holomorphy_verdict_untestable_at_field_zero():
    rows = hm.holomorphy_verdict(lambda z: z**2, [0j, 0.5 + 0j], D2)
    assert rows[0].verdict == "untestable"
    assert rows[0].estimate is None
    assert rows[1].verdict == "holomorphic"


def test_system_verdict_on_exact_solution():
    d4 = hm.power_density(4)
    f = hm.make_field("pharm-radial:4")
    cfg = hm.SweepConfig(r0=0.02)
    (row,) = hm.system_verdict(f, 0.5 + 0.3j, d4, cfg)
    assert row.status == "satisfied"
    assert row.analytic_satisfied is True
    assert row.sweep_satisfied is True
    assert row.consistent
    # the analytic residual rests on finite-difference derivatives
    assert abs(row.analytic_residual) <= 1e-8


def test_system_verdict_on_violator():
    f = hm.make_field("modsq")
    (row,) = hm.system_verdict(f, 0.7 + 0.1j, D2)
    assert row.status == "violated"
    assert row.analytic_satisfied is False
    assert row.consistent


def test_system_verdict_untestable_at_zero():
    (row,) = hm.system_verdict(lambda z: z, 0j, D2)
    assert row.status == "untestable"
    assert row.analytic_satisfied is None


def test_amvp_verdict_holds_for_solution():
    cfg = hm.SweepConfig(r0=0.02)
    (row,) = hm.amvp_verdict(np.exp, 0.4 + 0.2j, D2, cfg)
    assert row.status == "holds"
    assert row.holds is True
    assert row.consistent
    assert abs(row.estimate.limit) <= 1e-4


def test_amvp_verdict_fails_for_nonsolution():
    (row,) = hm.amvp_verdict(np.conj, 0.5 + 0.5j, D3)
    assert row.status == "fails"
    assert row.holds is False


def test_verdicts_accept_point_arrays():
    pts = np.array([0.5 + 0.5j, 0.6 - 0.2j])
    rows = hm.amvp_verdict(np.exp, pts, D2, hm.SweepConfig(r0=0.02))
    assert len(rows) == 2
    assert all(r.status == "holds" for r in rows)
