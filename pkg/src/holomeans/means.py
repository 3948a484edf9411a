"""Variational means of complex fields over circles.

The central problem solved here: given samples of a field f on the circle of
radius r at z, a convex radial density F and a model weight m(zeta), find the
complex coefficient c minimizing

    sum_j w_j F(|f(zeta_j) - c * m(zeta_j)|).

Two model weights cover every mean in the package: ``m = conj(zeta - z)``
gives the derivative-detecting circle mean, ``m = 1`` the center component of
the pair mean.  The minimizer is unique (strict convexity plus growth), and
the solver is a damped Newton iteration in the two real coordinates of c
using the exact complex Hessian of H(w) = F(|w|), with an Armijo line search
and a derivative-free golden-section fallback for the rare iterates that put
a residual exactly at zero, where H stops being twice differentiable.

The sup-norm mean is different in kind: it reduces to a smallest enclosing
circle problem and is solved exactly by a randomized incremental algorithm.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass

import numpy as np

from .density import young_conjugate
from .errors import InvalidParameterError, ZeroFieldError
from .geometry import circle_rule, sample_field

__all__ = [
    "SolverConfig",
    "MeanResult",
    "PairMeanResult",
    "InfinityMeanResult",
    "AffineIdentityResult",
    "variational_circle_mean",
    "center_circle_mean",
    "pair_mean",
    "conjugate_transformed_mean",
    "infinity_mean",
    "affine_mean_identity",
    "fit_model_coefficient",
]

# Field-modulus floor below which zero-sensitive operations refuse to run.
FIELD_FLOOR = 1e-8
# Transformed-field floor for the conjugate mean.
TRANSFORM_FLOOR = 1e-12

_STATUS_ACTIVE = 0
_STATUS_CONVERGED = 1
_STATUS_FALLBACK = 2
_STATUS_FAILED = 3
_STATUS_NAMES = {
    _STATUS_CONVERGED: "converged",
    _STATUS_FALLBACK: "fallback_used",
    _STATUS_FAILED: "failed",
}

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SolverConfig:
    """Knobs of the Newton solver.

    ``foc_tol_coeff`` scales the first-order stopping tolerance
    ``foc_tol = foc_tol_coeff * (1 + mean of F'(|f|) on the circle)``.
    Convergence additionally requires the pending Newton step to be at most
    ``step_tol * (1 + |c|)``: when the density degenerates at small residuals
    (growth exponent above 2) a small gradient alone does not bound the
    parameter error, and the step length is the sound certificate.
    ``residual_floor`` is the modulus below which a pointwise residual counts
    as an exact zero and triggers the derivative-free fallback.
    """

    max_iterations: int = 60
    foc_tol_coeff: float = 1e-10
    step_tol: float = 1e-11
    armijo_slope: float = 1e-4
    backtrack_factor: float = 0.5
    max_backtracks: int = 60
    residual_floor: float = 1e-12
    fallback_move_tol: float = 1e-13
    fallback_max_cycles: int = 80


@dataclass(frozen=True)
class MeanResult:
    """Outcome of one variational mean solve.

    ``foc_residual`` is the modulus of the first-order condition scaled by
    the total quadrature weight and the model modulus, so it is comparable
    with F' values.  ``status`` is one of ``converged``, ``fallback_used``
    or ``failed``; a failed result still carries the best iterate.
    """

    minimizer: complex
    objective: float
    foc_residual: float
    iterations: int
    status: str


@dataclass(frozen=True)
class PairMeanResult:
    """Joint center/derivative mean: value = center.minimizer + r * slope.minimizer."""

    center: MeanResult
    slope: MeanResult
    radius: float
    value: complex


@dataclass(frozen=True)
class InfinityMeanResult:
    """Sup-norm mean: objective is the minimized max modulus.

    ``support_count`` certifies the enclosing-circle solution: at least two
    samples must attain the optimal value up to 1e-9.
    """

    minimizer: complex
    objective: float
    support_count: int
    status: str


@dataclass(frozen=True)
class AffineIdentityResult:
    """Coefficients of the implicit identity satisfied by the mean of an affine field.

    For f(zeta) = value + dz (zeta - z) + dzbar conj(zeta - z) and its mean c
    at radius r, the exact first-order condition rearranges to

        c = dzbar + alpha conj(dz) + beta dz + gamma (conj(dzbar) - conj(c)),

    with alpha, beta, gamma ratios of double integrals over the unit circle
    and a segment parameter.  ``residual`` is the defect of that identity.
    """

    alpha: complex
    beta: complex
    gamma: complex
    residual: float


def _check_nodes(node_count):
    n = int(node_count)
    if n < 8:
        raise InvalidParameterError(f"need at least 8 circle nodes, got {n}")
    return n


def _objective_rows(d, samples, weights, model, c):
    u = samples - c[:, None] * model[None, :]
    return np.asarray(d.value_fn(np.abs(u)), dtype=float) @ weights


def fit_model_coefficient(d, samples, weights, model, init, cfg=None):
    """Batched minimization of ``sum_j w_j F(|samples_j - c model_j|)``.

    Parameters
    ----------
    d : Density
    samples : complex array, shape (batch, nodes)
    weights : positive float array, shape (nodes,)
    model : complex array, shape (nodes,), bounded away from zero
    init : complex array, shape (batch,)
    cfg : SolverConfig, optional

    Returns
    -------
    dict with arrays ``minimizer``, ``objective``, ``foc_residual``,
    ``iterations`` and integer ``status`` codes (1 converged, 2 fallback
    used, 3 failed).
    """
    cfg = cfg or SolverConfig()
    samples = np.asarray(samples, dtype=complex)
    weights = np.asarray(weights, dtype=float)
    model = np.asarray(model, dtype=complex)
    if samples.ndim != 2 or model.ndim != 1 or samples.shape[1] != model.shape[0]:
        raise InvalidParameterError("samples must be (batch, nodes) matching model")
    mmod = np.abs(model)
    mscale = float(np.max(mmod))
    mfloor = float(np.min(mmod))
    if mfloor <= 0.0:
        raise InvalidParameterError("model weights must be bounded away from zero")
    total_w = float(np.sum(weights))

    nbatch = samples.shape[0]
    c = np.asarray(init, dtype=complex).copy()
    state = np.full(nbatch, _STATUS_ACTIVE, dtype=int)
    foc_out = np.zeros(nbatch)
    iters = np.zeros(nbatch, dtype=int)

    favg = (np.asarray(d.deriv_fn(np.abs(samples)), dtype=float) @ weights) / total_w
    foc_tol = cfg.foc_tol_coeff * (1.0 + favg)
    floor = cfg.residual_floor

    def gradient(rows, cc):
        u = samples[rows] - cc[:, None] * model[None, :]
        au = np.abs(u)
        au_safe = np.where(au > 0.0, au, 1.0)
        fp = np.asarray(d.deriv_fn(au), dtype=float)
        g = -0.5 * ((fp * (u / au_safe) * np.conj(model)) @ weights)
        return u, au, g

    for it in range(cfg.max_iterations):
        act = np.flatnonzero(state == _STATUS_ACTIVE)
        if act.size == 0:
            break
        u, au, g = gradient(act, c[act])
        foc = np.abs(g) / (total_w * mscale)
        exact = np.all(au < floor, axis=1)
        foc = np.where(exact, 0.0, foc)
        foc_out[act] = foc
        iters[act] = it
        small_foc = foc <= foc_tol[act]
        anyzero = np.any(au < floor, axis=1)
        # Rows with exactly-zero pointwise residuals cannot form a Hessian;
        # converge them on the gradient alone, or hand them to the fallback.
        done = exact | (small_foc & anyzero)
        state[act[done]] = _STATUS_CONVERGED
        state[act[anyzero & ~small_foc & ~exact]] = _STATUS_FALLBACK
        rem = ~done & ~anyzero
        if not np.any(rem):
            continue

        rows = act[rem]
        small_foc = small_foc[rem]
        u_r, au_r, g_r = u[rem], au[rem], g[rem]
        au_s = np.maximum(au_r, floor)
        fp = np.asarray(d.deriv_fn(au_s), dtype=float)
        fpp = np.asarray(d.second_deriv_fn(au_s), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            lam = au_s * fpp / fp
        lam = np.where(np.isfinite(lam), lam, 1.0)
        base = fp / (4.0 * au_s)
        a_coef = ((base * (lam + 1.0)) * (mmod**2)[None, :]) @ weights
        phase2 = (u_r / au_s) ** 2
        b_coef = ((base * (lam - 1.0)) * phase2 * (np.conj(model) ** 2)[None, :]) @ weights
        denom = a_coef**2 - np.abs(b_coef) ** 2
        good = np.isfinite(denom) & (denom > 0.0)
        delta = np.zeros_like(g_r)
        np.divide(
            -a_coef * g_r + b_coef * np.conj(g_r),
            denom,
            out=delta,
            where=good,
        )
        settled = (
            small_foc
            & good
            & (np.abs(delta) <= cfg.step_tol * (1.0 + np.abs(c[rows])))
        )
        state[rows[settled]] = _STATUS_CONVERGED
        slope = 2.0 * np.real(np.conj(g_r) * delta)
        good &= np.isfinite(slope) & (slope < 0.0) & ~settled
        state[rows[~good & ~settled]] = _STATUS_FALLBACK
        rows, delta, slope = rows[good], delta[good], slope[good]
        if rows.size == 0:
            continue

        obj0 = _objective_rows(d, samples[rows], weights, model, c[rows])
        # Near the optimum the true decrease of a Newton step can drop below
        # the float resolution of the objective; a few-ulp allowance keeps
        # the line search from rejecting such steps, and the gradient-based
        # settling test then certifies convergence.
        flat = 16.0 * np.finfo(float).eps * (1.0 + np.abs(obj0))
        t = np.ones(rows.size)
        ok = np.zeros(rows.size, dtype=bool)
        for _ in range(cfg.max_backtracks):
            cand = c[rows] + t * delta
            obj1 = _objective_rows(d, samples[rows], weights, model, cand)
            ok = np.isfinite(obj1) & (
                obj1 <= obj0 + cfg.armijo_slope * t * slope + flat
            )
            if np.all(ok):
                break
            t = np.where(ok, t, t * cfg.backtrack_factor)
        c[rows[ok]] += (t * delta)[ok]
        state[rows[~ok]] = _STATUS_FALLBACK

    act = np.flatnonzero(state == _STATUS_ACTIVE)
    if act.size:
        # Iteration budget exhausted.  Near a flat optimum the Newton step
        # stalls at the float noise floor without ever satisfying step_tol;
        # accept rows whose final iterate meets the first-order tolerance
        # and fail only the rest.
        u, au, g = gradient(act, c[act])
        foc = np.abs(g) / (total_w * mscale)
        foc = np.where(np.all(au < floor, axis=1), 0.0, foc)
        foc_out[act] = foc
        iters[act] = cfg.max_iterations
        met = foc <= foc_tol[act]
        state[act[met]] = _STATUS_CONVERGED
        state[act[~met]] = _STATUS_FAILED

    fb = np.flatnonzero(state == _STATUS_FALLBACK)
    if fb.size:
        c[fb], cycles, finished = _coordinate_descent(
            d, samples[fb], weights, model, c[fb], mfloor, cfg
        )
        iters[fb] += cycles
        state[fb[~finished]] = _STATUS_FAILED
        _, _, g_fb = gradient(fb, c[fb])
        foc_out[fb] = np.abs(g_fb) / (total_w * mscale)

    return {
        "minimizer": c,
        "objective": _objective_rows(d, samples, weights, model, c),
        "foc_residual": foc_out,
        "iterations": iters,
        "status": state,
    }


def _coordinate_descent(d, samples, weights, model, c, mfloor, cfg):
    """Golden-section descent over Re(c), Im(c) for the fallback rows.

    The global minimizer satisfies |c| <= 2 max|f| / min|m| (moving further
    away makes every residual larger than at c = 0), so a box of that size
    around the current iterate brackets each coordinate slice.
    """
    c = c.copy()
    nrows = c.shape[0]
    reach = 2.0 * np.max(np.abs(samples), axis=1) / mfloor + np.abs(c) + 1.0

    def obj_at(x, coord):
        cc = x + 1j * c.imag if coord == 0 else c.real + 1j * x
        return _objective_rows(d, samples, weights, model, cc)

    finished = np.zeros(nrows, dtype=bool)
    cycles = 0
    for cycle in range(cfg.fallback_max_cycles):
        cycles = cycle + 1
        moved = np.zeros(nrows)
        for coord in (0, 1):
            base = c.real if coord == 0 else c.imag
            lo = base - reach
            hi = base + reach
            tol = cfg.fallback_move_tol * (1.0 + np.abs(c))
            for _ in range(200):
                if np.all(hi - lo <= tol):
                    break
                x1 = hi - _INVPHI * (hi - lo)
                x2 = lo + _INVPHI * (hi - lo)
                left = obj_at(x1, coord) < obj_at(x2, coord)
                hi = np.where(left, x2, hi)
                lo = np.where(left, lo, x1)
            x = 0.5 * (lo + hi)
            moved = np.maximum(moved, np.abs(x - base))
            c = x + 1j * c.imag if coord == 0 else c.real + 1j * x
        if np.all(moved <= cfg.fallback_move_tol * (1.0 + np.abs(c))):
            finished[:] = True
            break
    else:
        # a full cycle still moved some coordinate; report those as unfinished
        finished = moved <= cfg.fallback_move_tol * (1.0 + np.abs(c))
    if np.all(finished):
        finished = np.ones(nrows, dtype=bool)
    return c, cycles, finished


def _single_result(fit):
    code = int(fit["status"][0])
    return MeanResult(
        minimizer=complex(fit["minimizer"][0]),
        objective=float(fit["objective"][0]),
        foc_residual=float(fit["foc_residual"][0]),
        iterations=int(fit["iterations"][0]),
        status=_STATUS_NAMES[code],
    )


def _circle_setup(f, z, r, node_count):
    q = circle_rule(z, r, _check_nodes(node_count))
    vals = sample_field(f, q.nodes)
    return q, vals[None, :]


def variational_circle_mean(f, z, r, d, node_count=64, cfg=None):
    """Derivative-detecting circle mean of ``f`` at ``z`` with radius ``r``.

    Minimizes ``integral of F(|f(zeta) - c conj(zeta - z)|)`` over the
    circle.  Initialized at the quadratic closed form, which is exact for
    the power density with p = 2.
    """
    z = complex(z)
    q, samples = _circle_setup(f, z, r, node_count)
    model = np.conj(q.nodes - z)
    init = (samples * (q.nodes - z)) @ q.weights / (2.0 * np.pi * r**3)
    fit = fit_model_coefficient(d, samples, q.weights, model, init, cfg)
    return _single_result(fit)


def center_circle_mean(f, z, r, d, node_count=64, cfg=None):
    """Constant-model circle mean: the F-barycenter of f on the circle."""
    z = complex(z)
    q, samples = _circle_setup(f, z, r, node_count)
    model = np.ones_like(q.nodes)
    init = samples @ q.weights / (2.0 * np.pi * r)
    fit = fit_model_coefficient(d, samples, q.weights, model, init, cfg)
    return _single_result(fit)


def pair_mean(f, z, r, d, node_count=64, cfg=None):
    """Joint mean: center a plus slope b with value a + r b.

    The objective separates exactly into the two independent single-model
    problems, so the pair is computed as two solves.
    """
    z = complex(z)
    q, samples = _circle_setup(f, z, r, node_count)
    model_a = np.ones_like(q.nodes)
    init_a = samples @ q.weights / (2.0 * np.pi * r)
    fit_a = fit_model_coefficient(d, samples, q.weights, model_a, init_a, cfg)
    model_b = np.conj(q.nodes - z)
    init_b = (samples * (q.nodes - z)) @ q.weights / (2.0 * np.pi * r**3)
    fit_b = fit_model_coefficient(d, samples, q.weights, model_b, init_b, cfg)
    a_res = _single_result(fit_a)
    b_res = _single_result(fit_b)
    return PairMeanResult(
        center=a_res,
        slope=b_res,
        radius=float(r),
        value=complex(a_res.minimizer + r * b_res.minimizer),
    )


def conjugate_transformed_mean(g, z, r, d, node_count=64, cfg=None,
                               zero_floor=TRANSFORM_FLOOR):
    """Circle mean of the conjugate-slope transform of ``g``.

    The samples are mapped through ``t -> G'(|g|) g / |g|`` with G the Young
    conjugate of F, then fed to the derivative-detecting mean with F itself.
    Vanishing of the small-radius limit characterizes holomorphy of g.

    Raises
    ------
    ZeroFieldError
        If any circle sample has ``|g| < zero_floor``; the transform needs a
        nonvanishing field.
    """
    z = complex(z)
    q, samples = _circle_setup(g, z, r, node_count)
    mod = np.abs(samples[0])
    if np.any(mod < zero_floor):
        j = int(np.argmin(mod))
        raise ZeroFieldError(
            f"conjugate transform needs |g| >= {zero_floor:g} on the circle; "
            f"|g({q.nodes[j]:.6g})| = {mod[j]:.3e}"
        )
    conj_slope = young_conjugate(d).deriv_fn(mod)
    transformed = (conj_slope * samples[0] / mod)[None, :]
    model = np.conj(q.nodes - z)
    init = (transformed * (q.nodes - z)) @ q.weights / (2.0 * np.pi * r**3)
    fit = fit_model_coefficient(d, transformed, q.weights, model, init, cfg)
    return _single_result(fit)


# -- sup-norm mean ----------------------------------------------------------

def _circle_from_two(a, b):
    center = (a + b) / 2.0
    return center, abs(a - center)


def _circumcircle(a, b, c):
    # shift by the centroid to control cancellation
    o = (a + b + c) / 3.0
    ax, ay = (a - o).real, (a - o).imag
    bx, by = (b - o).real, (b - o).imag
    cx, cy = (c - o).real, (c - o).imag
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if d == 0.0:
        return None
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay)
          + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx)
          + (cx * cx + cy * cy) * (bx - ax)) / d
    center = o + complex(ux, uy)
    radius = max(abs(a - center), abs(b - center), abs(c - center))
    return center, radius


def _inside(circle, p):
    return circle is not None and abs(p - circle[0]) <= circle[1] * (1.0 + 1e-14)


def _smallest_enclosing_circle(points, seed):
    """Randomized incremental smallest enclosing circle (expected linear time)."""
    pts = list(points)
    random.Random(seed).shuffle(pts)
    circle = None
    for i, p in enumerate(pts):
        if _inside(circle, p):
            continue
        circle = (p, 0.0)
        for j in range(i):
            q = pts[j]
            if _inside(circle, q):
                continue
            circle = _circle_from_two(p, q)
            for k in range(j):
                s = pts[k]
                if _inside(circle, s):
                    continue
                cc = _circumcircle(p, q, s)
                if cc is not None:
                    circle = cc
    return circle


def infinity_mean(f, z, r, node_count=64, seed=0):
    """Sup-norm circle mean: minimize ``max_j |f(zeta_j) - c conj(zeta_j - z)|``.

    Since |conj(zeta - z)| = r on the circle, dividing through reduces the
    problem to the Chebyshev center of the points ``f(zeta_j)(zeta_j - z)/r**2``,
    i.e. a smallest enclosing circle, solved exactly.  The fixed shuffle seed
    makes the run deterministic.
    """
    z = complex(z)
    q, samples = _circle_setup(f, z, r, node_count)
    v = samples[0] * (q.nodes - z) / r**2
    center, radius = _smallest_enclosing_circle(v.tolist(), seed)
    value = r * radius
    attained = r * np.abs(v - center)
    support = int(np.sum(attained >= value - 1e-9 * (1.0 + value)))
    return InfinityMeanResult(
        minimizer=complex(center),
        objective=float(value),
        support_count=support,
        status="converged",
    )


def affine_mean_identity(jet, r, c, d, node_count=64, radial_nodes=32):
    """Coefficients and defect of the exact identity for affine-field means.

    Parameters
    ----------
    jet : geometry.Jet
        The affine field's coefficients (value, dz, dzbar) at its base point.
    r : float
        Circle radius.
    c : complex
        A computed variational circle mean of that affine field at radius r.
    d : Density

    Notes
    -----
    The integrand is evaluated on a tensor grid (unit circle) x (segment
    parameter in [0, 1], Gauss-Legendre).  A node where the segment argument
    vanishes exactly is nudged by half a step; the singularity is integrable.
    """
    if abs(jet.value) < FIELD_FLOOR:
        raise ZeroFieldError(
            f"affine identity needs |value| >= {FIELD_FLOOR:g} at the base point"
        )
    n = _check_nodes(node_count)
    m = int(radial_nodes)
    if m < 4:
        raise InvalidParameterError(f"need at least 4 segment nodes, got {m}")
    omega, sig, tau = complex(jet.value), complex(jet.dz), complex(jet.dzbar)
    c = complex(c)

    theta = 2.0 * np.pi * np.arange(n) / n
    zeta = np.exp(1j * theta)
    x, v = np.polynomial.legendre.leggauss(m)
    t = 0.5 * (x + 1.0)
    t_w = 0.5 * v

    direction = sig * zeta + (tau - c) * np.conj(zeta)
    w = omega + r * t[:, None] * direction[None, :]
    aw = np.abs(w)
    tiny = aw < 1e-12
    if np.any(tiny):
        warnings.warn(
            "segment argument hit zero at a quadrature node; nudging by a "
            "half step (integrable singularity)",
            RuntimeWarning,
            stacklevel=2,
        )
        gap = 0.5 * np.min(np.diff(np.sort(t)))
        t_shift = np.where(np.any(tiny, axis=1), t + gap, t)
        w = omega + r * t_shift[:, None] * direction[None, :]
        aw = np.abs(w)

    kernel = np.asarray(d.deriv_fn(aw), dtype=float) / aw
    lam = aw * np.asarray(d.second_deriv_fn(aw), dtype=float) / np.asarray(
        d.deriv_fn(aw), dtype=float
    )
    meas = t_w[:, None] * np.full(n, 2.0 * np.pi / n)[None, :]
    phase2 = w / np.conj(w)

    den = float(np.sum(kernel * (lam + 1.0) * meas).real)
    alpha = np.sum(kernel * (lam - 1.0) * phase2 * meas) / den
    beta = np.sum(kernel * (lam + 1.0) * (zeta**2)[None, :] * meas) / den
    gamma = np.sum(kernel * (lam - 1.0) * phase2 * (zeta**2)[None, :] * meas) / den

    predicted = tau + alpha * np.conj(sig) + beta * sig + gamma * (
        np.conj(tau) - np.conj(c)
    )
    return AffineIdentityResult(
        alpha=complex(alpha),
        beta=complex(beta),
        gamma=complex(gamma),
        residual=float(abs(c - predicted)),
    )
