"""Strictly convex radial densities and their Young (Legendre-Fenchel) conjugates.

A density here is the radial profile ``F`` of an integrand ``H(w) = F(|w|)``
acting on complex residuals.  It must satisfy ``F(0) = 0``, ``F'(0+) = 0``,
``F'' > 0`` on ``(0, inf)`` and unbounded growth, and the log-derivative ratio

    lam(s) = s * F''(s) / F'(s)

must stay pinched between declared positive bounds ``lambda_lo <= lam(s) <=
lambda_hi``.  Those bounds drive every quantitative estimate downstream, so
they are carried on the object and checked by :func:`validate_density` rather
than silently inferred.

The small-argument behaviour ``F'(s) ~ small_coeff * s**small_exponent`` is
declared as well; the pair gives the exact value ``lam(0+) = small_exponent``
used where a limit of ``lam`` at zero is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DegenerateDensityError,
    DomainError,
    InvalidParameterError,
    SingularPointError,
)

__all__ = [
    "Density",
    "ComplexHessian",
    "CheckResult",
    "ValidationReport",
    "power_density",
    "lambda_of",
    "complex_hessian",
    "young_conjugate",
    "validate_density",
]

# Floor below which a complex argument counts as the singular origin.
W_FLOOR = 1e-300

_BISECTION_STEPS = 48
_POLISH_STEPS = 40
_POLISH_REL_TOL = 1e-12
_MAX_BRACKET_DOUBLINGS = 256


def _as_float_array(s, allow_zero, what):
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0.0):
        raise DomainError(f"{what} is defined on s >= 0, got negative input")
    if not allow_zero and np.any(arr == 0.0):
        raise DomainError(f"{what} requires s > 0")
    return arr


def _give_back(arr, template):
    if np.ndim(template) == 0:
        return float(np.asarray(arr).reshape(()))
    return arr


@dataclass(frozen=True)
class Density:
    """Radial convex profile with declared structure constants.

    Parameters
    ----------
    value_fn, deriv_fn, second_deriv_fn : callable
        Vectorized evaluations of F, F' and F''.  ``value_fn`` and
        ``deriv_fn`` must accept all s >= 0, ``second_deriv_fn`` s > 0.
    lambda_lo, lambda_hi : float
        Declared pinching bounds for ``s F''(s) / F'(s)``, with
        ``0 < lambda_lo <= lambda_hi``.
    small_exponent, small_coeff : float
        Leading behaviour ``F'(s) ~ small_coeff * s**small_exponent`` near 0.
    label : str
        Human-readable name used in reports.
    """

    value_fn: Callable
    deriv_fn: Callable
    second_deriv_fn: Callable
    lambda_lo: float
    lambda_hi: float
    small_exponent: float
    small_coeff: float
    label: str = "density"

    def __post_init__(self):
        if not (0.0 < self.lambda_lo <= self.lambda_hi):
            raise InvalidParameterError(
                "density bounds must satisfy 0 < lambda_lo <= lambda_hi, "
                f"got [{self.lambda_lo}, {self.lambda_hi}]"
            )

    def value(self, s):
        """F(s) for s >= 0."""
        arr = _as_float_array(s, True, f"{self.label}: F")
        return _give_back(np.asarray(self.value_fn(arr), dtype=float), s)

    def deriv(self, s):
        """F'(s) for s >= 0."""
        arr = _as_float_array(s, True, f"{self.label}: F'")
        return _give_back(np.asarray(self.deriv_fn(arr), dtype=float), s)

    def second_deriv(self, s):
        """F''(s) for s > 0."""
        arr = _as_float_array(s, False, f"{self.label}: F''")
        return _give_back(np.asarray(self.second_deriv_fn(arr), dtype=float), s)

    @property
    def lambda_at_zero(self):
        """Limit of the pinching ratio at 0+, equal to the declared exponent."""
        return self.small_exponent


@dataclass(frozen=True)
class ComplexHessian:
    """First and second Wirtinger derivatives of ``H(w) = F(|w|)``.

    ``d_wbar`` is the gradient component dH/d(conj w); ``d_wbar_w`` the
    (real, positive) mixed second derivative; ``d_wbar_wbar`` the pure one.
    """

    d_wbar: complex
    d_wbar_w: float
    d_wbar_wbar: complex


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    location: float
    message: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple
    ok: bool

    def failed(self):
        return tuple(c for c in self.checks if not c.passed)


def power_density(p):
    """The power profile F(s) = s**p / p with constant pinching ratio p - 1.

    Parameters
    ----------
    p : float
        Exponent, must exceed 1 for strict convexity with F'(0) = 0.
    """
    p = float(p)
    if not np.isfinite(p) or p <= 1.0:
        raise InvalidParameterError(f"power density needs p > 1, got {p}")

    def _value(s):
        return s**p / p

    def _deriv(s):
        return s ** (p - 1.0)

    def _second(s):
        return (p - 1.0) * s ** (p - 2.0)

    return Density(
        value_fn=_value,
        deriv_fn=_deriv,
        second_deriv_fn=_second,
        lambda_lo=p - 1.0,
        lambda_hi=p - 1.0,
        small_exponent=p - 1.0,
        small_coeff=1.0,
        label=f"power[p={p:g}]",
    )


def lambda_of(d, s):
    """Pinching ratio ``s F''(s) / F'(s)`` evaluated at s > 0."""
    arr = _as_float_array(s, False, f"{d.label}: lambda")
    fp = np.asarray(d.deriv_fn(arr), dtype=float)
    if np.any(fp <= 0.0):
        raise DegenerateDensityError(
            f"{d.label}: F' must be positive on s > 0 for the pinching ratio"
        )
    out = arr * np.asarray(d.second_deriv_fn(arr), dtype=float) / fp
    return _give_back(out, s)


def complex_hessian(d, w):
    """Wirtinger gradient and Hessian of ``H(w) = F(|w|)`` at ``w != 0``.

    Returns a :class:`ComplexHessian`; all three entries scale with F' and
    the pinching ratio:

        d_wbar      = F'(|w|) * w / (2 |w|)
        d_wbar_w    = F'(|w|) * (lam(|w|) + 1) / (4 |w|)
        d_wbar_wbar = F'(|w|) * (lam(|w|) - 1) / (4 |w|) * (w / conj(w))
    """
    w = complex(w)
    aw = abs(w)
    if aw < W_FLOOR:
        raise SingularPointError("complex_hessian is undefined at w = 0")
    fp = float(d.deriv(aw))
    lam = float(lambda_of(d, aw))
    phase2 = w / np.conj(w)
    return ComplexHessian(
        d_wbar=fp * w / (2.0 * aw),
        d_wbar_w=fp * (lam + 1.0) / (4.0 * aw),
        d_wbar_wbar=fp * (lam - 1.0) / (4.0 * aw) * phase2,
    )


def _invert_deriv(d, t):
    """Solve F'(s) = t for s >= 0, vectorized.

    Bracket [0, hi] with hi grown geometrically from max(1, t**(1/lambda_lo)),
    then bisection and a guarded Newton polish to relative tolerance 1e-12.
    """
    t = np.asarray(t, dtype=float)
    shape = t.shape
    flat = t.ravel().copy()
    if np.any(flat < 0.0):
        raise DomainError(f"{d.label}: conjugate slope needs t >= 0")
    out = np.zeros_like(flat)
    pos = flat > 0.0
    if not np.any(pos):
        return out.reshape(shape)

    tv = flat[pos]
    with np.errstate(over="ignore"):
        hi = np.maximum(1.0, tv ** (1.0 / d.lambda_lo))
    hi = np.where(np.isfinite(hi), hi, 1.0)
    for _ in range(_MAX_BRACKET_DOUBLINGS):
        need = np.asarray(d.deriv_fn(hi), dtype=float) < tv
        if not np.any(need):
            break
        hi = np.where(need, 2.0 * hi, hi)
    else:
        raise DegenerateDensityError(
            f"{d.label}: could not bracket F'(s) = t; F' may be bounded"
        )

    lo = np.zeros_like(hi)
    for _ in range(_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        below = np.asarray(d.deriv_fn(mid), dtype=float) < tv
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)

    s = 0.5 * (lo + hi)
    for _ in range(_POLISH_STEPS):
        fp = np.asarray(d.deriv_fn(s), dtype=float)
        fpp = np.asarray(d.second_deriv_fn(np.maximum(s, 1e-300)), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(fpp > 0.0, (fp - tv) / fpp, 0.0)
        s_new = np.clip(s - step, lo, hi)
        moved = np.abs(s_new - s)
        s = s_new
        if np.all(moved <= _POLISH_REL_TOL * (1.0 + np.abs(s))):
            break

    out[pos] = s
    return out.reshape(shape)


def young_conjugate(d):
    """The conjugate profile G with G'(t) inverting F'.

    G(t) = t G'(t) - F(G'(t)); G'' follows from F''(G') G'' = 1, and the
    pinching bounds invert: lam_G in [1/lambda_hi, 1/lambda_lo].

    Raises
    ------
    DegenerateDensityError
        If F' is not strictly increasing on a coarse sampling grid.
    """
    probe = np.geomspace(1e-8, 1e8, 33)
    fp = np.asarray(d.deriv_fn(probe), dtype=float)
    if np.any(~np.isfinite(fp)) or np.any(np.diff(fp) <= 0.0):
        raise DegenerateDensityError(
            f"{d.label}: F' is not strictly increasing; conjugate undefined"
        )

    def _g_deriv(t):
        return _invert_deriv(d, t)

    def _g_value(t):
        s = _invert_deriv(d, t)
        return np.asarray(t, dtype=float) * s - np.asarray(d.value_fn(s), dtype=float)

    def _g_second(t):
        s = _invert_deriv(d, t)
        fpp = np.asarray(d.second_deriv_fn(np.maximum(s, 1e-300)), dtype=float)
        return 1.0 / fpp

    alpha = d.small_exponent
    return Density(
        value_fn=_g_value,
        deriv_fn=_g_deriv,
        second_deriv_fn=_g_second,
        lambda_lo=1.0 / d.lambda_hi,
        lambda_hi=1.0 / d.lambda_lo,
        small_exponent=1.0 / alpha,
        small_coeff=d.small_coeff ** (-1.0 / alpha),
        label=f"conjugate[{d.label}]",
    )


def validate_density(d, sample_count=200):
    """Sample-based structural audit of a density.

    Checks, on a geometric grid spanning [1e-6, 1e6]:

    * ``zero_at_zero``      F(0) = 0
    * ``deriv_at_zero``     F' follows the declared small-argument power law
    * ``strict_convexity``  F'' > 0 everywhere sampled
    * ``deriv_positive``    F' > 0 on s > 0
    * ``lambda_bounds``     the pinching ratio respects the declared bounds
    * ``monotone_growth``   F increases and is unbounded in practice

    Returns a :class:`ValidationReport`; nothing is raised on failure.
    """
    if sample_count < 16:
        raise InvalidParameterError("sample_count must be at least 16")
    grid = np.geomspace(1e-6, 1e6, int(sample_count))
    checks = []

    f0 = float(d.value(0.0))
    checks.append(
        CheckResult(
            "zero_at_zero",
            abs(f0) <= 1e-12,
            abs(f0),
            0.0,
            f"F(0) = {f0:.3e}",
        )
    )

    small = grid[grid <= 1e-4]
    expected = d.small_coeff * small**d.small_exponent
    fp_small = np.asarray(d.deriv_fn(small), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(expected > 0.0, fp_small / expected, np.inf)
    dev = np.max(np.abs(np.log10(np.maximum(ratio, 1e-300))))
    loc = float(small[int(np.argmax(np.abs(np.log10(np.maximum(ratio, 1e-300)))))])
    checks.append(
        CheckResult(
            "deriv_at_zero",
            bool(np.isfinite(dev) and dev <= 1.0),
            float(dev),
            loc,
            "log10 deviation of F' from declared small-argument law",
        )
    )

    fpp = np.asarray(d.second_deriv_fn(grid), dtype=float)
    worst_idx = int(np.argmin(fpp))
    checks.append(
        CheckResult(
            "strict_convexity",
            bool(np.all(fpp > 0.0)),
            float(fpp[worst_idx]),
            float(grid[worst_idx]),
            f"min F'' = {fpp[worst_idx]:.3e}",
        )
    )

    fp = np.asarray(d.deriv_fn(grid), dtype=float)
    worst_idx = int(np.argmin(fp))
    checks.append(
        CheckResult(
            "deriv_positive",
            bool(np.all(fp > 0.0)),
            float(fp[worst_idx]),
            float(grid[worst_idx]),
            f"min F' = {fp[worst_idx]:.3e}",
        )
    )

    if np.all(fp > 0.0) and np.all(np.isfinite(fpp)):
        lam = grid * fpp / fp
        slack = 1e-9 * (1.0 + abs(d.lambda_hi))
        viol = np.maximum(d.lambda_lo - lam, lam - d.lambda_hi)
        worst_idx = int(np.argmax(viol))
        checks.append(
            CheckResult(
                "lambda_bounds",
                bool(np.all(viol <= slack)),
                float(viol[worst_idx]),
                float(grid[worst_idx]),
                f"lam = {lam[worst_idx]:.6g} outside "
                f"[{d.lambda_lo:g}, {d.lambda_hi:g}]"
                if viol[worst_idx] > slack
                else "",
            )
        )
    else:
        checks.append(
            CheckResult(
                "lambda_bounds", False, np.inf, float(grid[0]),
                "pinching ratio not computable (F' <= 0 or F'' not finite)",
            )
        )

    fv = np.asarray(d.value_fn(grid), dtype=float)
    increasing = bool(np.all(np.diff(fv) > 0.0))
    big = float(fv[-1]) >= 1e3 * max(1.0, float(d.value(1.0)))
    checks.append(
        CheckResult(
            "monotone_growth",
            increasing and big,
            float(fv[-1]),
            float(grid[-1]),
            "F must increase without bound",
        )
    )

    checks = tuple(checks)
    return ValidationReport(checks=checks, ok=all(c.passed for c in checks))
