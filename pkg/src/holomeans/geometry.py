"""Circle and disk quadrature, complex jets and finite-difference derivatives.

Circles use the uniform trapezoidal rule, which is spectrally accurate for
periodic integrands.  Disks combine a Gauss-Legendre radial rule with the
uniform angular rule.  Jets collect the value and the two first Wirtinger
derivatives of a field at a base point:

    2 df/dz      = df/dx - i df/dy
    2 df/d(conj z) = df/dx + i df/dy
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, NonFiniteSampleError

__all__ = [
    "CircleQuadrature",
    "DiskQuadrature",
    "Jet",
    "circle_rule",
    "disk_rule",
    "circle_integral",
    "disk_integral",
    "sample_field",
    "wirtinger_jet",
    "affine_eval",
    "weighted_holomorphic_mean",
    "projection_pair",
]

DEFAULT_CIRCLE_NODES = 64
DEFAULT_RADIAL_NODES = 32
FD_STEP_SCALE = 1e-5


@dataclass(frozen=True)
class CircleQuadrature:
    """Nodes and weights for the boundary circle of D_r(center).

    Weights are uniform and sum to the circumference 2*pi*radius.
    """

    center: complex
    radius: float
    nodes: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class DiskQuadrature:
    """Tensor nodes and weights integrating over the disk D_r(center).

    Weights sum to the area pi*radius**2; polynomial moments in
    (zeta - center) up to the radial rule's degree are exact.
    """

    center: complex
    radius: float
    nodes: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class Jet:
    """First-order complex jet of a field at ``base``.

    ``value`` is f(base), ``dz`` the z-derivative, ``dzbar`` the conjugate
    derivative.
    """

    base: complex
    value: complex
    dz: complex
    dzbar: complex


def circle_rule(center, radius, node_count=DEFAULT_CIRCLE_NODES):
    """Uniform quadrature on the circle of given center and radius."""
    if radius <= 0.0 or not np.isfinite(radius):
        raise InvalidParameterError(f"circle radius must be positive, got {radius}")
    n = int(node_count)
    if n < 8:
        raise InvalidParameterError(f"need at least 8 circle nodes, got {n}")
    theta = 2.0 * np.pi * np.arange(n) / n
    nodes = center + radius * np.exp(1j * theta)
    weights = np.full(n, 2.0 * np.pi * radius / n)
    return CircleQuadrature(complex(center), float(radius), nodes, weights)


def disk_rule(center, radius, radial_nodes=DEFAULT_RADIAL_NODES,
              node_count=DEFAULT_CIRCLE_NODES):
    """Gauss-Legendre (radial) x uniform (angular) quadrature on a disk."""
    if radius <= 0.0 or not np.isfinite(radius):
        raise InvalidParameterError(f"disk radius must be positive, got {radius}")
    m = int(radial_nodes)
    n = int(node_count)
    if m < 4 or n < 8:
        raise InvalidParameterError(
            f"need at least 4 radial and 8 angular nodes, got ({m}, {n})"
        )
    x, v = np.polynomial.legendre.leggauss(m)
    rho = 0.5 * (x + 1.0) * radius
    rho_w = 0.5 * radius * v
    theta = 2.0 * np.pi * np.arange(n) / n
    ring = np.exp(1j * theta)
    nodes = (center + rho[:, None] * ring[None, :]).ravel()
    weights = ((rho_w * rho)[:, None] * np.full(n, 2.0 * np.pi / n)[None, :]).ravel()
    return DiskQuadrature(complex(center), float(radius), nodes, weights)


def sample_field(f, points):
    """Evaluate a vectorized field and fail loudly on non-finite samples."""
    pts = np.asarray(points, dtype=complex)
    vals = np.asarray(f(pts), dtype=complex)
    if vals.shape != pts.shape:
        try:
            vals = np.broadcast_to(vals, pts.shape).astype(complex)
        except ValueError:
            raise InvalidParameterError(
                f"field returned shape {vals.shape} for points of shape {pts.shape}"
            ) from None
    bad = ~np.isfinite(vals)
    if np.any(bad):
        where = pts[bad].ravel()[0]
        raise NonFiniteSampleError(
            f"field returned a non-finite value near {where:.6g}"
        )
    return vals


def circle_integral(q, values):
    """Integrate samples (or a callable) against a circle rule."""
    if callable(values):
        values = sample_field(values, q.nodes)
    values = np.asarray(values)
    if values.shape[-1] != q.nodes.shape[0]:
        raise InvalidParameterError(
            "sample count does not match the quadrature rule"
        )
    if np.any(~np.isfinite(values)):
        idx = int(np.argwhere(~np.isfinite(np.atleast_1d(values)))[0][-1])
        raise NonFiniteSampleError(
            f"non-finite integrand at node {idx} ({q.nodes[idx]:.6g})"
        )
    return values @ q.weights


disk_integral = circle_integral


def wirtinger_jet(f, z, step=None):
    """First-order jet of ``f`` at ``z`` by central finite differences.

    The default step is ``1e-5 * (1 + |z|)``; the scheme is second order
    accurate in the step.
    """
    z = complex(z)
    if step is None:
        step = FD_STEP_SCALE * (1.0 + abs(z))
    h = float(step)
    if h <= 0.0:
        raise InvalidParameterError(f"finite-difference step must be positive, got {h}")
    pts = np.array([z, z + h, z - h, z + 1j * h, z - 1j * h])
    w = sample_field(f, pts)
    fx = (w[1] - w[2]) / (2.0 * h)
    fy = (w[3] - w[4]) / (2.0 * h)
    return Jet(
        base=z,
        value=complex(w[0]),
        dz=complex(0.5 * (fx - 1j * fy)),
        dzbar=complex(0.5 * (fx + 1j * fy)),
    )


def affine_eval(jet, zeta):
    """Evaluate the affine field determined by a jet.

    Returns ``value + dz * (zeta - base) + dzbar * conj(zeta - base)``.
    """
    dz = np.asarray(zeta, dtype=complex) - jet.base
    out = jet.value + jet.dz * dz + jet.dzbar * np.conj(dz)
    if np.ndim(zeta) == 0:
        return complex(out)
    return out


def weighted_holomorphic_mean(f, z, r, quadrature=None):
    """Disk average of ``f`` against the holomorphy-detecting weight.

    Computes ``(1 / area) * integral of f(zeta) (1 + (2 / r)(zeta - z)) dA``
    over the disk of radius ``r`` at ``z``.  The weight integrates to the
    area, and the mean reproduces f(z) exactly when f is holomorphic on the
    closed disk.
    """
    z = complex(z)
    q = quadrature if quadrature is not None else disk_rule(z, r)
    vals = sample_field(f, q.nodes)
    kernel = 1.0 + (2.0 / q.radius) * (q.nodes - z)
    area = np.pi * q.radius**2
    return complex((vals * kernel) @ q.weights / area)


def projection_pair(f, z, r, quadrature=None):
    """Least-squares coefficients of ``f`` on ``{1, conj(zeta - z)}`` over a disk.

    Returns ``(a, b)`` with ``a`` the plain disk average and ``b`` scaled so
    the weighted mean above equals ``a + r * b``.
    """
    z = complex(z)
    q = quadrature if quadrature is not None else disk_rule(z, r)
    vals = sample_field(f, q.nodes)
    area = np.pi * q.radius**2
    a = vals @ q.weights / area
    b = 2.0 * ((vals * (q.nodes - z)) @ q.weights) / (area * q.radius**2)
    return complex(a), complex(b)
