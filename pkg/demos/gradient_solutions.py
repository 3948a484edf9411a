"""The radial gradient family: quasiregularity and two reformulations.

The complexified gradient of the radial potential solves the nonlinear
system for its exponent.  This demo verifies, on an annulus, the dilatation
bound, the gradient-system residual, and the constant-coefficient Beltrami
residual.
"""

import numpy as np

import holomeans as hm


def main():
    p = 3.0
    f = hm.make_field("pharm-radial:3")
    K = max(p - 1.0, 1.0 / (p - 1.0))
    bound = (K - 1.0) / (K + 1.0)

    pts = [
        rho * np.exp(1j * th)
        for rho in (0.3, 0.6, 0.9)
        for th in 2.0 * np.pi * np.arange(6) / 6.0
    ]

    worst_ratio = 0.0
    worst_sys = 0.0
    worst_bel = 0.0
    for z in pts:
        jet = hm.wirtinger_jet(f, z)
        worst_ratio = max(worst_ratio, abs(jet.dzbar) / abs(jet.dz))
        u2 = hm.radial_potential_jet2(p, z)
        worst_sys = max(worst_sys, abs(hm.p_harmonic_gradient_residual(u2, p)))
        worst_bel = max(worst_bel, abs(hm.beltrami_residual(f, z, p).residual))

    print(f"radial gradient field, exponent p = {p} (distortion K = {K}):")
    print(f"  worst |f_zbar| / |f_z|      {worst_ratio:.6f}  (bound {bound:.6f})")
    print(f"  worst gradient residual     {worst_sys:.2e}")
    print(f"  worst Beltrami residual     {worst_bel:.2e}")

    kappa = (1.0 - np.sqrt(p - 1.0)) / (1.0 + np.sqrt(p - 1.0))
    print(f"  Beltrami coefficient kappa  {kappa:+.6f}")

    # A field that is NOT in the family leaves a visible residual.
    res = hm.beltrami_residual(np.exp, 0.5 + 0.2j, p)
    print(f"\nexp is not a p = 3 solution: Beltrami residual {abs(res.residual):.3e}")

    # The dilatation check API wraps the pointwise bound for one jet.
    d3 = hm.power_density(p)
    print()
    for z in pts[:4]:
        rep = hm.dilatation_check(hm.wirtinger_jet(f, z), d3)
        print(
            f"  z = {z:+.3f}: ratio {rep.ratio:.4f} <= {rep.bound:.4f} "
            f"-> {'ok' if rep.ok else 'violated'}"
        )


if __name__ == "__main__":
    main()
