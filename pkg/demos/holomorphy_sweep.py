"""Deciding holomorphy by radius-sweep extrapolation.

Runs conjugate-transformed mean sweeps for a holomorphic field and for the
conjugate field, extrapolates the r -> 0 limit, and compares the verdicts
and limits against the closed forms.
"""

import numpy as np

import holomeans as hm


def show_sweep(name, f, z, d):
    sw = hm.sweep("conjugate", f, z, d, hm.SweepConfig(r0=0.1))
    est = hm.extrapolate(sw)
    print(f"{name} at z = {z}:")
    for r, v in zip(sw.radii, sw.values):
        print(f"  r = {r:7.4f}   |mean| = {abs(v):.6e}")
    print(f"  extrapolated limit {abs(est.limit):.6e}  verdict: {est.verdict}\n")
    return est


def main():
    d = hm.power_density(1.5)
    z = 0.7 + 0.2j

    show_sweep("exp (holomorphic)", np.exp, z, d)
    est = show_sweep("conj (anti-holomorphic)", np.conj, z, d)

    # For the conjugate field the limit has a closed form: (2/p) |z|^(q-2)
    # with q the dual exponent.
    p = 1.5
    q = p / (p - 1.0)
    predicted = (2.0 / p) * abs(z) ** (q - 2.0)
    print(f"closed-form limit for conj: {predicted:.6e}")
    print(f"gap: {abs(abs(est.limit) - predicted):.2e}\n")

    # The verdict API wraps the sweep, the extrapolation, and the decision.
    pts = [0.5 + 0.1j, -0.3 + 0.6j, 0.2 - 0.8j]
    for name, f in (("exp", np.exp), ("conj", np.conj)):
        rows = hm.holomorphy_verdict(f, pts, d)
        verdicts = ", ".join(r.verdict for r in rows)
        print(f"holomorphy_verdict({name}): {verdicts}")


if __name__ == "__main__":
    main()
