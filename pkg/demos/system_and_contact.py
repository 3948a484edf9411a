"""System verdicts and the directional contact test.

Checks whether fields satisfy the nonlinear first-order system three ways:
by radius-sweep extrapolation, by the closed-form residual, and by probing
the contact envelope along unit directions.  Solutions pass all three;
non-solutions fail all three.
"""

import numpy as np

import holomeans as hm


def main():
    p = 4.0
    d = hm.power_density(p)
    cfg = hm.SweepConfig(r0=0.02)
    pts = [0.7 + 0.3j, -0.5 + 0.6j, 0.45 + 0.05j]

    for spec in ("pharm-radial:4", "exp", "modsq"):
        f = hm.make_field(spec)
        rows = hm.system_verdict(f, pts, d, cfg)
        print(f"{spec} under the p = {p} system:")
        for row in rows:
            print(
                f"  z = {row.point}: {row.status}  "
                f"(sweep limit {abs(row.estimate.limit):.2e}, "
                f"analytic residual {abs(row.analytic_residual):.2e})"
            )
        print()

    # The contact test probes Re(conj(xi) * residual) along a fan of unit
    # directions xi; a solution's envelope limit vanishes in every direction.
    f = hm.make_field("pharm-radial:4")
    report = hm.contact_solution_verdict(f, pts, d, directions=8, cfg=cfg)
    held = sum(1 for r in report.rows if r.status == "holds")
    print(
        f"contact test on pharm-radial:4: {held}/{len(report.rows)} "
        f"direction checks hold, camvp_pass = {report.camvp_pass}"
    )

    report = hm.contact_solution_verdict(np.conj, pts, d, directions=8, cfg=cfg)
    held = sum(1 for r in report.rows if r.status == "holds")
    print(
        f"contact test on conj:           {held}/{len(report.rows)} "
        f"direction checks hold, camvp_pass = {report.camvp_pass}"
    )

    # The envelope itself is available in closed form.
    w, s, t = 1.0 + 0.5j, 0.3 - 0.2j, 0.1 + 0.4j
    jet = hm.Jet(base=0j, value=w, dz=s, dzbar=t)
    print("\nenvelope vs projected residual for one jet:")
    for xi in hm.unit_directions(4):
        env = hm.xi_envelope(w, s, t, xi, d)
        proj = np.real(np.conj(xi) * hm.cr_residual(jet, d))
        print(f"  xi = {xi:+.3f}: envelope {env:+.6f}, projected {proj:+.6f}")


if __name__ == "__main__":
    main()
