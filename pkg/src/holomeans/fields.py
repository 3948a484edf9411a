"""Built-in complex fields with exact jets, and a small field registry.

Every field carries a vectorised sampler, a label, an optional exact
first-order jet, and an optional excluded point where it is singular or
vanishes.  The registry parses specs of the form ``name`` or
``name:arg1,arg2,...`` (complex arguments accept ``i`` or ``j`` for the
imaginary unit), which the command line interface and the demo scripts use
to name fields without code.

Exact jets make the fields usable as ground truth: the radial p-harmonic
gradient field, in particular, solves the nonlinear Cauchy-Riemann system
of the power density exactly away from the origin, with dilatation ratio on
the boundary of the quasiregularity bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .geometry import Jet
from .pdesystem import RealJet2

__all__ = [
    "Field",
    "parse_complex",
    "make_field",
    "field_names",
    "radial_potential_jet2",
]


@dataclass(frozen=True)
class Field:
    """A named complex field with optional exact derivative information."""

    label: str
    sample: object  # vectorised callable: complex array -> complex array
    jet_fn: object = None  # callable: complex point -> Jet, or None
    excluded_point: complex | None = None

    def __call__(self, pts):
        return self.sample(pts)

    def jet(self, z):
        """Exact first-order jet at ``z``; None when not available."""
        if self.jet_fn is None:
            return None
        return self.jet_fn(complex(z))


def parse_complex(text):
    """Parse a complex number accepting ``i`` or ``j`` notation.

    Examples: ``1``, ``-2.5``, ``1+2i``, ``0.5j``, ``i``, ``-i``.
    """
    s = str(text).strip().replace(" ", "")
    if not s:
        raise InvalidParameterError("empty complex literal")
    s = s.replace("i", "j").replace("I", "j").replace("J", "j")
    if s in ("j", "+j"):
        s = "1j"
    elif s == "-j":
        s = "-1j"
    else:
        # bare trailing j with no digits, e.g. "2+j"
        s = s.replace("+j", "+1j").replace("-j", "-1j")
    try:
        return complex(s)
    except ValueError as exc:
        raise InvalidParameterError(f"cannot parse complex literal {text!r}") from exc


def _const_field(c):
    c = complex(c)

    def sample(pts):
        return np.full_like(np.asarray(pts, dtype=complex), c)

    return Field(
        label=f"const:{c:g}" if c.imag == 0 else f"const:{c}",
        sample=sample,
        jet_fn=lambda z: Jet(z, c, 0j, 0j),
    )


def _identity_field():
    return Field(
        label="identity",
        sample=lambda pts: np.asarray(pts, dtype=complex).copy(),
        jet_fn=lambda z: Jet(z, z, 1 + 0j, 0j),
    )


def _square_field():
    return Field(
        label="square",
        sample=lambda pts: np.asarray(pts, dtype=complex) ** 2,
        jet_fn=lambda z: Jet(z, z * z, 2 * z, 0j),
    )


def _cube_field():
    return Field(
        label="cube",
        sample=lambda pts: np.asarray(pts, dtype=complex) ** 3,
        jet_fn=lambda z: Jet(z, z**3, 3 * z * z, 0j),
    )


def _exp_field():
    return Field(
        label="exp",
        sample=lambda pts: np.exp(np.asarray(pts, dtype=complex)),
        jet_fn=lambda z: Jet(z, np.exp(z), np.exp(z), 0j),
    )


def _conj_field():
    return Field(
        label="conj",
        sample=lambda pts: np.conj(np.asarray(pts, dtype=complex)),
        jet_fn=lambda z: Jet(z, z.conjugate(), 0j, 1 + 0j),
    )


def _modsq_field():
    return Field(
        label="modsq",
        sample=lambda pts: (
            np.abs(np.asarray(pts, dtype=complex)) ** 2
        ).astype(complex),
        jet_fn=lambda z: Jet(z, complex(abs(z) ** 2), z.conjugate(), z),
        excluded_point=0j,
    )


def _affine_field(value, dz, dzbar):
    value, dz, dzbar = complex(value), complex(dz), complex(dzbar)

    def sample(pts):
        pts = np.asarray(pts, dtype=complex)
        return value + dz * pts + dzbar * np.conj(pts)

    return Field(
        label=f"affine:{value},{dz},{dzbar}",
        sample=sample,
        jet_fn=lambda z: Jet(z, value + dz * z + dzbar * z.conjugate(), dz, dzbar),
    )


def pharm_exponent(p):
    """Radial growth exponent gamma = (p - 2) / (p - 1) of the potential."""
    if p <= 1.0:
        raise InvalidParameterError(f"exponent must satisfy p > 1, got {p}")
    return (p - 2.0) / (p - 1.0)


def _pharm_radial_field(p):
    """Gradient field of the radial p-harmonic potential |z|**gamma.

    With gamma = (p - 2)/(p - 1) the potential solves the p-Laplace
    equation away from the origin; the gradient field and its Wirtinger
    derivatives are

        f          = gamma * conj(z) * |z|**(gamma - 2)
        df/dz      = gamma * (gamma - 2) / 2 * conj(z)**2 * |z|**(gamma - 4)
        df/d(conj) = gamma**2 / 2 * |z|**(gamma - 2)

    Singular at the origin for p < 2 and degenerate (zero gradient) there
    for p > 2, so the origin is excluded either way.
    """
    gamma = pharm_exponent(p)
    if gamma == 0.0:
        raise InvalidParameterError(
            "p = 2 gives a constant potential; use another field for that case"
        )

    def sample(pts):
        pts = np.asarray(pts, dtype=complex)
        return gamma * np.conj(pts) * np.abs(pts) ** (gamma - 2.0)

    def jet_fn(z):
        a = abs(z)
        return Jet(
            base=z,
            value=gamma * z.conjugate() * a ** (gamma - 2.0),
            dz=0.5 * gamma * (gamma - 2.0) * z.conjugate() ** 2 * a ** (gamma - 4.0),
            dzbar=0.5 * gamma**2 * a ** (gamma - 2.0),
        )

    return Field(
        label=f"pharm-radial:{p:g}",
        sample=sample,
        jet_fn=jet_fn,
        excluded_point=0j,
    )


def radial_potential_jet2(p, z):
    """Second-order jet of the radial p-harmonic potential |z|**gamma at z.

    Exact; used to drive the gradient-field residual checks.  Undefined at
    the origin.
    """
    gamma = pharm_exponent(p)
    z = complex(z)
    a = abs(z)
    if a == 0.0:
        raise InvalidParameterError("the radial potential jet is undefined at 0")
    x, y = z.real, z.imag
    g2 = a ** (gamma - 2.0)
    g4 = a ** (gamma - 4.0)
    return RealJet2(
        base=z,
        value=a**gamma,
        dx=gamma * x * g2,
        dy=gamma * y * g2,
        dxx=gamma * g2 + gamma * (gamma - 2.0) * x * x * g4,
        dxy=gamma * (gamma - 2.0) * x * y * g4,
        dyy=gamma * g2 + gamma * (gamma - 2.0) * y * y * g4,
    )


def _pharm_linear_field(p, direction=1 + 0j):
    """Gradient field of the linear potential Re(conj(direction) z).

    Affine potentials are p-harmonic for every p; the gradient field is the
    constant ``direction``, giving an exact solution with zero derivatives.
    """
    if p <= 1.0:
        raise InvalidParameterError(f"exponent must satisfy p > 1, got {p}")
    direction = complex(direction)
    if direction == 0j:
        raise InvalidParameterError("direction must be nonzero")
    base = _const_field(direction)
    return Field(
        label=f"pharm-linear:{p:g}",
        sample=base.sample,
        jet_fn=base.jet_fn,
    )


_BUILDERS = {
    "const": (_const_field, 1),
    "identity": (_identity_field, 0),
    "square": (_square_field, 0),
    "cube": (_cube_field, 0),
    "exp": (_exp_field, 0),
    "conj": (_conj_field, 0),
    "modsq": (_modsq_field, 0),
    "affine": (_affine_field, 3),
    "pharm-radial": (_pharm_radial_field, 1),
    "pharm-linear": (_pharm_linear_field, (1, 2)),
}

_REAL_ARG_NAMES = {"pharm-radial": (0,), "pharm-linear": (0,)}


def field_names():
    """Names understood by :func:`make_field`."""
    return tuple(sorted(_BUILDERS))


def make_field(spec):
    """Build a field from a ``name`` or ``name:args`` string.

    Arguments are comma separated complex literals; the exponent arguments
    of the p-harmonic fields are real.  Examples::

        identity
        const:2+i
        affine:1,0.5,0.25i
        pharm-radial:3
    """
    text = str(spec).strip()
    name, _, argtext = text.partition(":")
    name = name.strip()
    if name not in _BUILDERS:
        raise InvalidParameterError(
            f"unknown field {name!r}; known fields: {', '.join(field_names())}"
        )
    builder, arity = _BUILDERS[name]
    args = [a for a in argtext.split(",") if a.strip()] if argtext else []
    if isinstance(arity, tuple):
        lo, hi = arity
        if not (lo <= len(args) <= hi):
            raise InvalidParameterError(
                f"field {name!r} takes {lo} to {hi} arguments, got {len(args)}"
            )
    elif len(args) != arity:
        raise InvalidParameterError(
            f"field {name!r} takes {arity} argument(s), got {len(args)}"
        )
    real_slots = _REAL_ARG_NAMES.get(name, ())
    parsed = []
    for k, raw in enumerate(args):
        val = parse_complex(raw)
        if k in real_slots:
            if val.imag != 0.0:
                raise InvalidParameterError(
                    f"argument {k + 1} of field {name!r} must be real, got {raw!r}"
                )
            parsed.append(float(val.real))
        else:
            parsed.append(val)
    return builder(*parsed)
