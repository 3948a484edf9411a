"""Acceptance gate: one test per advertised capability, one line per verdict.

Each test prints a single summary line with the measured worst case and the
pinned tolerance, so a ``pytest -v -s`` run reads as a checklist.  Thresholds
that depend on discretization choices (the grid iteration error budget) were
calibrated by the refinement study in ``demos/dpp_refinement.py``; the
numbers cited in the docstrings below come from that study.
"""

import numpy as np
import pytest

import holomeans as hm

D = {p: hm.power_density(p) for p in (1.5, 2.0, 3.0, 4.0)}

JET_BASE = 0.37 - 0.21j


def random_jets(count=20, seed=42):
    """Random affine jets with the value bounded away from zero."""
    rng = np.random.default_rng(seed)
    jets = []
    while len(jets) < count:
        w = complex(*rng.standard_normal(2))
        if abs(w) < 0.1:
            continue
        s = complex(*rng.standard_normal(2))
        t = complex(*rng.standard_normal(2))
        jets.append((w, s, t))
    return jets


def affine_field(w, s, t, z0=JET_BASE):
    return lambda zeta: w + s * (zeta - z0) + t * np.conj(zeta - z0)


def jet_ladder(w, s, t):
    """Radius ladder scaled to the jet so first-order terms dominate."""
    return hm.SweepConfig(r0=0.02 * abs(w) / (1.0 + abs(s) + abs(t)))


def test_criterion_01_weighted_mean_value_property():
    """Weighted circle means reproduce holomorphic point values.

    20 random disks per field; defect tolerance 1e-9.  The same weighting
    applied to the conjugate field at the origin returns the radius itself.
    """
    rng = np.random.default_rng(1)
    worst = 0.0
    for f in (lambda z: z**2, lambda z: z**3, np.exp):
        for _ in range(20):
            z = complex(*rng.uniform(-1.0, 1.0, 2))
            r = rng.uniform(0.05, 0.5)
            got = hm.weighted_holomorphic_mean(f, z, r)
            worst = max(worst, abs(got - f(z)))
    assert worst <= 1e-9

    worst_conj = 0.0
    for _ in range(20):
        r = rng.uniform(0.05, 0.5)
        worst_conj = max(worst_conj, abs(hm.weighted_holomorphic_mean(np.conj, 0j, r) - r))
    assert worst_conj <= 1e-9
    print(
        f"criterion 1 (weighted mean value property): PASS - "
        f"worst defect {worst:.3e}, conj-at-0 defect {worst_conj:.3e} (tol 1e-9)"
    )


def test_criterion_02_slope_mean_limit_matches_jet_bracket():
    """The derivative-detecting mean converges to the jet bracket.

    20 random jets (|value| >= 0.1, seed 42) x p in {1.5, 2, 3, 4}; the
    extrapolated limit must match tau + mu(|omega|)(omega/conj omega)
    conj(sigma) within 1e-4.  The ladder start 0.02 |omega| / (1 + |sigma| +
    |tau|) keeps the quadratic extrapolation bias well under the tolerance.
    """
    worst = 0.0
    for (w, s, t) in random_jets():
        f = affine_field(w, s, t)
        cfg = jet_ladder(w, s, t)
        for p in (1.5, 2.0, 3.0, 4.0):
            sw = hm.sweep("variational", f, JET_BASE, D[p], cfg)
            est = hm.extrapolate(sw)
            mu = (p - 2.0) / p
            expected = t + mu * (w / np.conj(w)) * np.conj(s)
            worst = max(worst, abs(est.limit - expected))
    assert worst <= 1e-4
    print(f"criterion 2 (slope-mean limit vs jet bracket): PASS - worst gap {worst:.3e} (tol 1e-4)")


def test_criterion_03_affine_identity_residual():
    """The exact identity certifies computed means of affine fields.

    Same 20 jets as criterion 2, all four exponents, radius 1e-3; the
    identity defect evaluated at the computed mean stays below 1e-6.
    """
    r = 1e-3
    worst = 0.0
    for (w, s, t) in random_jets():
        f = affine_field(w, s, t)
        jet = hm.Jet(base=JET_BASE, value=w, dz=s, dzbar=t)
        for p in (1.5, 2.0, 3.0, 4.0):
            res = hm.variational_circle_mean(f, JET_BASE, r, D[p])
            assert res.status == "converged"
            ident = hm.affine_mean_identity(jet, r, res.minimizer, D[p])
            worst = max(worst, ident.residual)
    assert worst <= 1e-6
    print(f"criterion 3 (affine mean identity): PASS - worst residual {worst:.3e} (tol 1e-6)")


def test_criterion_04_holomorphy_verdicts_and_conjugate_limit():
    """Holomorphy detection by the conjugate-transformed mean.

    square/exp/cube at 10 random points x p in {1.5, 2, 3} are all reported
    holomorphic; for the conjugate field the extrapolated limit matches
    (2/p) |g|^(q-2) d(conj g) with q = p/(p-1), within 1e-3.
    """
    rng = np.random.default_rng(4)
    pts = [
        complex(rho * np.cos(th), rho * np.sin(th))
        for rho, th in zip(rng.uniform(0.4, 0.9, 10), rng.uniform(0, 2 * np.pi, 10))
    ]
    fields = {"square": lambda z: z**2, "exp": np.exp, "cube": lambda z: z**3}
    for p in (1.5, 2.0, 3.0):
        for name, f in fields.items():
            rows = hm.holomorphy_verdict(f, pts, D[p])
            assert all(r.verdict == "holomorphic" for r in rows), (name, p)

    worst = 0.0
    for p in (1.5, 2.0, 3.0):
        q = p / (p - 1.0)
        rows = hm.holomorphy_verdict(np.conj, pts, D[p])
        for z, row in zip(pts, rows):
            assert row.verdict == "not_holomorphic"
            expected = (2.0 / p) * abs(np.conj(z)) ** (q - 2.0) * 1.0
            worst = max(worst, abs(row.estimate.limit - expected))
    assert worst <= 1e-3
    print(
        "criterion 4 (holomorphy verdicts, conjugate-field limit): PASS - "
        f"worst limit gap {worst:.3e} (tol 1e-3)"
    )


def test_criterion_05_sup_mean_limit_and_support():
    """The sup-norm mean has the p -> infinity bracket and a real support set.

    Same 20 jets; the extrapolated limit matches tau + (omega / conj omega)
    conj(sigma) within 1e-4, and the exact smallest-circle solve reports at
    least two support points at every ladder radius.
    """
    worst = 0.0
    for (w, s, t) in random_jets():
        f = affine_field(w, s, t)
        cfg = jet_ladder(w, s, t)
        sw = hm.sweep("infinity", f, JET_BASE, None, cfg)
        assert all(e.get("support_count", 0) >= 2 for e in sw.extras)
        est = hm.extrapolate(sw)
        expected = t + (w / np.conj(w)) * np.conj(s)
        worst = max(worst, abs(est.limit - expected))
    assert worst <= 1e-4
    print(f"criterion 5 (sup-mean limit and support): PASS - worst gap {worst:.3e} (tol 1e-4)")


def test_criterion_06_centered_mean_increment_bracket():
    """The centered pair-mean increment has the advertised first-order limit.

    Smooth fields bounded away from zero, p in {2, 3}: the extrapolated
    (pair mean - field value) / r limit agrees with the analytic bracket
    within 1e-3 (the verdict's consistency gap).
    """
    cfg = hm.SweepConfig(r0=0.02)
    cases = {
        "exp": (np.exp, (0.4 + 0.2j, -0.5 + 0.1j)),
        "cube": (lambda z: z**3, (0.8 + 0.3j, -0.7 - 0.4j)),
        "modsq": (lambda z: np.abs(z) ** 2, (0.9 + 0.1j, -0.6 + 0.6j)),
        "pharm-linear": (hm.make_field("pharm-linear:3"), (0.5 + 0.5j,)),
    }
    worst = 0.0
    for name, (f, pts) in cases.items():
        for p in (2.0, 3.0):
            rows = hm.amvp_verdict(f, pts, D[p], cfg)
            for row in rows:
                assert row.status != "untestable", (name, p)
                assert row.consistent, (name, p, row.point, row.bracket_gap)
                worst = max(worst, row.bracket_gap)
    assert worst <= 1e-3
    print(
        f"criterion 6 (centered increment bracket): PASS - worst gap {worst:.3e} (tol 1e-3)"
    )


ANNULUS = [
    complex(rho * np.cos(th), rho * np.sin(th))
    for rho in (0.3, 0.5, 0.7, 0.9)
    for th in 2.0 * np.pi * np.arange(16) / 16.0
]


def test_criterion_07_dilatation_bound_on_radial_gradient():
    """The radial gradient field at p = 3 is 2-quasiregular.

    On an annulus grid: |df/d(conj z)| <= ((K-1)/(K+1)) |df/dz| + 1e-6 with
    K = 2, the distortion of the cubic-power density.
    """
    f = hm.make_field("pharm-radial:3")
    bound = 1.0 / 3.0
    worst = -np.inf
    for z in ANNULUS:
        jet = hm.wirtinger_jet(f, z)
        slack = abs(jet.dzbar) - bound * abs(jet.dz)
        worst = max(worst, slack)
        assert abs(jet.dzbar) <= bound * abs(jet.dz) + 1e-6
    print(
        f"criterion 7 (dilatation bound, K = 2): PASS - worst slack {worst:.3e} (tol 1e-6)"
    )


def test_criterion_08_gradient_system_and_beltrami_residuals():
    """The radial potential's gradient solves both reformulations at p = 3.

    Away from the origin the gradient-field system residual and the
    constant-coefficient Beltrami residual both stay below 1e-6.
    """
    p = 3.0
    f = hm.make_field("pharm-radial:3")
    worst_sys = 0.0
    worst_bel = 0.0
    for z in ANNULUS:
        u2 = hm.radial_potential_jet2(p, z)
        worst_sys = max(worst_sys, abs(hm.p_harmonic_gradient_residual(u2, p)))
        worst_bel = max(worst_bel, abs(hm.beltrami_residual(f, z, p).residual))
    assert worst_sys <= 1e-6
    assert worst_bel <= 1e-6
    print(
        "criterion 8 (gradient system + Beltrami residuals): PASS - "
        f"worst {worst_sys:.3e} / {worst_bel:.3e} (tol 1e-6)"
    )


def test_criterion_09_three_way_verdict_agreement():
    """Sweep, analytic, and directional verdicts agree across the library.

    Ten catalogue fields x p in {1.5, 2, 4} x five points, 16 probe
    directions each: the radius-sweep system verdict, the closed-form
    residual verdict, and the all-directions contact verdict must agree
    pairwise, with no inconclusive or untestable outcomes.
    """
    library = (
        "const:2+1i", "identity", "square", "cube", "exp",
        "conj", "modsq", "affine:1,0.5,0.3", "pharm-radial:4", "pharm-linear:3",
    )
    points = (0.7 + 0.3j, -0.5 + 0.6j, 0.9 - 0.4j, -0.8 - 0.5j, 0.45 + 0.05j)
    cfg = hm.SweepConfig(r0=0.02)
    checked = 0
    for spec in library:
        f = hm.make_field(spec)
        for p in (1.5, 2.0, 4.0):
            d = D[p]
            rows = hm.system_verdict(f, points, d, cfg)
            report = hm.contact_solution_verdict(f, points, d, 16, cfg)
            camvp_ok = {
                z: all(r.status == "holds" for r in report.rows if r.point == z)
                for z in points
            }
            assert not report.untestable_points, (spec, p)
            for row in rows:
                assert row.status in ("satisfied", "violated"), (spec, p, row)
                agree = (
                    bool(row.sweep_satisfied)
                    == bool(row.analytic_satisfied)
                    == camvp_ok[row.point]
                )
                assert agree, (spec, p, row.point)
                checked += 1
    assert checked == 150
    print(
        f"criterion 9 (three-way verdict agreement): PASS - {checked} configurations, 0 disagreements"
    )


def test_criterion_10_grid_iteration():
    """The grid fixed-point iteration behaves as advertised.

    (a) constant data is recognized as a fixed point within two sweeps;
    (b) quadratic density, boundary data exp on the unit square, h = 0.02,
        r = 0.1: interior sup error <= 5e-2.  The refinement study
        (demos/dpp_refinement.py) measured 2.30e-2 for this configuration
        and showed the error is flat in h (2.2e-2 - 2.6e-2 over h in
        [0.02, 0.05]) and dominated by the stopping tolerance, so the
        threshold has about 2x headroom;
    (c) p = 4, h = 0.05, r = 0.15, damping 0.5: the residual history
        decreases monotonically after a burn-in of at most 20 sweeps (the
        study measured monotone decay from the first sweep).
    """
    # (a) constant data
    g = hm.grid_from_function(
        0.0, 1.0, 0.0, 1.0, 0.1, 0.2, lambda z: np.full(z.shape, 2 + 1j)
    )
    res = hm.dpp_solve(g, D[2.0], hm.DppConfig(radius=0.2, residual_tol=1e-12))
    assert res.converged and res.iterations <= 2
    err_a = np.abs(res.field.values[res.field.interior_mask()] - (2 + 1j)).max()

    # (b) exp boundary data, quadratic density
    g = hm.grid_from_function(0.0, 1.0, 0.0, 1.0, 0.02, 0.1, np.exp)
    g = hm.with_interior(g, complex(np.mean(g.values)))
    cfg = hm.DppConfig(radius=0.1, residual_tol=1e-3, max_iterations=500)
    res = hm.dpp_solve(g, D[2.0], cfg)
    assert res.converged
    mask = res.field.interior_mask()
    err_b = np.abs(res.field.values - np.exp(res.field.points()))[mask].max()
    assert err_b <= 5e-2

    # (c) p = 4 monotone decay
    g = hm.grid_from_function(0.0, 1.0, 0.0, 1.0, 0.05, 0.15, np.exp)
    g = hm.with_interior(g, complex(np.mean(g.values)))
    cfg = hm.DppConfig(
        radius=0.15, damping=0.5, residual_tol=1e-4, max_iterations=1500
    )
    res = hm.dpp_solve(g, D[4.0], cfg)
    assert res.converged
    hist = np.asarray(res.residual_history)
    burn = min(20, hist.size - 1)
    assert np.all(np.diff(hist[burn:]) <= 0.0)
    print(
        "criterion 10 (grid iteration): PASS - const exact to "
        f"{err_a:.1e} in <=2 sweeps; exp sup error {err_b:.3e} (tol 5e-2); "
        f"p=4 residuals monotone after {burn} sweeps"
    )


def test_criterion_11_envelope_identity():
    """The directional envelope is the projected system residual.

    1000 random tuples (value != 0, slopes, unit direction) across all four
    exponents: the closed-form envelope equals Re(conj(xi) residual) to
    1e-14.
    """
    rng = np.random.default_rng(11)
    worst = 0.0
    powers = (1.5, 2.0, 3.0, 4.0)
    for k in range(1000):
        w = complex(*rng.standard_normal(2))
        if abs(w) < 1e-9:
            continue
        s = complex(*rng.standard_normal(2))
        t = complex(*rng.standard_normal(2))
        xi = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
        d = D[powers[k % 4]]
        env = hm.xi_envelope(w, s, t, xi, d)
        jet = hm.Jet(base=0j, value=w, dz=s, dzbar=t)
        projected = np.real(np.conj(xi) * hm.cr_residual(jet, d))
        worst = max(worst, abs(env - projected))
    assert worst <= 1e-14
    print(f"criterion 11 (envelope identity): PASS - worst gap {worst:.3e} (tol 1e-14)")
