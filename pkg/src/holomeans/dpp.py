"""Grid fixed-point iteration for the pair-mean dynamic programming principle.

The discrete problem: find a complex field on a square lattice that equals
its own pair mean at radius ``r`` at every interior node, with values held
fixed on a boundary strip wide enough to contain every sampling circle.
The solver damps the natural fixed-point map

    f  <-  (1 - theta) f + theta * (pair mean of f at radius r)

and stops when the sup update over computed nodes drops below a tolerance.
Circle samples between lattice nodes are obtained by bilinear interpolation;
all interior nodes share one set of circle offsets, so each sweep is a pair
of batched one-dimensional solves over every node at once.

Nodes where the field modulus falls below a floor make the mean ill-posed
(the density may lose smoothness at zero); the ``zero_policy`` either skips
them for the current sweep or freezes them permanently.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .density import Density
from .errors import (
    ConfigError,
    DivergenceError,
    InvalidParameterError,
    NonFiniteSampleError,
)
from .means import SolverConfig, fit_model_coefficient

__all__ = [
    "GridField",
    "DppConfig",
    "StepDiagnostics",
    "DppResult",
    "make_grid",
    "grid_from_function",
    "with_interior",
    "interpolate",
    "dpp_step",
    "dpp_solve",
    "write_checkpoint",
    "read_checkpoint",
]

GRID_SNAP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GridField:
    """Complex field on a uniform square lattice with an outer data strip.

    ``x0..x1`` and ``y0..y1`` bound the rectangle of unknown nodes (closed:
    nodes on the rectangle edge are unknowns too); the lattice extends
    ``strip_cells`` extra layers beyond every side, and those outer nodes
    carry fixed data so that every sampling circle around an unknown stays
    inside the lattice.  ``frozen`` marks nodes permanently excluded from
    updates under the freeze policy.
    """

    x0: float
    x1: float
    y0: float
    y1: float
    h: float
    strip_cells: int
    values: np.ndarray
    frozen: np.ndarray | None = None

    def __post_init__(self):
        if self.h <= 0.0:
            raise InvalidParameterError(f"lattice step must be positive, got {self.h}")
        for lo, hi, name in ((self.x0, self.x1, "x"), (self.y0, self.y1, "y")):
            span = (hi - lo) / self.h
            if hi <= lo:
                raise InvalidParameterError(f"{name} range is empty: [{lo}, {hi}]")
            if abs(span - round(span)) > GRID_SNAP_TOL * max(1.0, abs(span)):
                raise InvalidParameterError(
                    f"{name} range [{lo}, {hi}] is not a whole number of steps "
                    f"of {self.h}"
                )
        if self.strip_cells < 1:
            raise InvalidParameterError(
                f"strip must be at least one cell, got {self.strip_cells}"
            )
        nx, ny = self.shape
        if self.values.shape != (ny, nx):
            raise InvalidParameterError(
                f"values shape {self.values.shape} does not match lattice "
                f"({ny}, {nx})"
            )

    @property
    def shape(self):
        s = 2 * self.strip_cells
        nx = int(round((self.x1 - self.x0) / self.h)) + 1 + s
        ny = int(round((self.y1 - self.y0) / self.h)) + 1 + s
        return nx, ny

    @property
    def xs(self):
        nx, _ = self.shape
        return (self.x0 - self.strip_cells * self.h) + self.h * np.arange(nx)

    @property
    def ys(self):
        _, ny = self.shape
        return (self.y0 - self.strip_cells * self.h) + self.h * np.arange(ny)

    def points(self):
        """All lattice nodes as a complex (ny, nx) array."""
        return self.xs[None, :] + 1j * self.ys[:, None]

    def interior_mask(self):
        """Boolean (ny, nx) mask of unknown nodes (the closed rectangle)."""
        nx, ny = self.shape
        mask = np.zeros((ny, nx), dtype=bool)
        s = self.strip_cells
        mask[s : ny - s, s : nx - s] = True
        return mask


def strip_cells_for(radius, h):
    """Lattice layers needed so circles of ``radius`` stay inside the data."""
    return int(math.ceil(radius / h)) + 1


def make_grid(x0, x1, y0, y1, h, radius):
    """Zero-valued grid over ``[x0,x1] x [y0,y1]`` sized for the radius.

    The unknown rectangle is the one given; the returned lattice carries the
    extra outer layers needed so circles of ``radius`` around any unknown
    node stay inside.
    """
    if h <= 0.0:
        raise InvalidParameterError(f"lattice step must be positive, got {h}")
    if radius <= 0.0:
        raise InvalidParameterError(f"radius must be positive, got {radius}")
    s = strip_cells_for(radius, h)
    nx = int(round((x1 - x0) / h)) + 1 + 2 * s
    ny = int(round((y1 - y0) / h)) + 1 + 2 * s
    g = GridField(
        x0=float(x0),
        x1=float(x1),
        y0=float(y0),
        y1=float(y1),
        h=float(h),
        strip_cells=s,
        values=np.zeros((ny, nx), dtype=complex),
    )
    return g


def grid_from_function(x0, x1, y0, y1, h, radius, f):
    """Grid whose every node carries the sampled value of ``f``."""
    g = make_grid(x0, x1, y0, y1, h, radius)
    return replace(g, values=np.asarray(f(g.points()), dtype=complex))


def with_interior(grid, filler):
    """Copy of the grid with interior values replaced.

    ``filler`` is a constant or a callable of the complex nodes; strip
    values are kept, so this is the standard way to build an initial guess
    that honours the boundary data.
    """
    values = grid.values.copy()
    mask = grid.interior_mask()
    if callable(filler):
        values[mask] = np.asarray(filler(grid.points()), dtype=complex)[mask]
    else:
        values[mask] = complex(filler)
    return replace(grid, values=values)


def interpolate(grid, pts):
    """Bilinear interpolation of the grid field at complex points."""
    pts = np.asarray(pts, dtype=complex)
    nx, ny = grid.shape
    ox = grid.x0 - grid.strip_cells * grid.h
    oy = grid.y0 - grid.strip_cells * grid.h
    gx = (pts.real - ox) / grid.h
    gy = (pts.imag - oy) / grid.h
    pad = GRID_SNAP_TOL
    if np.any(gx < -pad) or np.any(gx > nx - 1 + pad) or np.any(
        gy < -pad
    ) or np.any(gy > ny - 1 + pad):
        bad = pts.ravel()[
            int(
                np.argmax(
                    np.maximum(
                        np.maximum(-gx, gx - (nx - 1)),
                        np.maximum(-gy, gy - (ny - 1)),
                    ).ravel()
                )
            )
        ]
        raise InvalidParameterError(f"point {bad} lies outside the lattice hull")
    ix = np.clip(np.floor(gx).astype(int), 0, nx - 2)
    iy = np.clip(np.floor(gy).astype(int), 0, ny - 2)
    fx = gx - ix
    fy = gy - iy
    v = grid.values
    return (
        (1.0 - fx) * (1.0 - fy) * v[iy, ix]
        + fx * (1.0 - fy) * v[iy, ix + 1]
        + (1.0 - fx) * fy * v[iy + 1, ix]
        + fx * fy * v[iy + 1, ix + 1]
    )


@dataclass(frozen=True)
class DppConfig:
    """Settings of the damped fixed-point iteration."""

    radius: float
    damping: float = 0.8
    max_iterations: int = 500
    residual_tol: float = 1e-3
    node_count: int = 64
    zero_policy: str = "skip"
    zero_floor: float = 1e-8
    divergence_window: int = 50
    divergence_factor: float = 10.0
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if self.radius <= 0.0:
            raise ConfigError(f"radius must be positive, got {self.radius}")
        if not (0.0 < self.damping <= 1.0):
            raise ConfigError(f"damping must lie in (0, 1], got {self.damping}")
        if self.zero_policy not in ("skip", "freeze"):
            raise ConfigError(
                f"zero_policy must be 'skip' or 'freeze', got {self.zero_policy!r}"
            )


@dataclass(frozen=True)
class StepDiagnostics:
    residual_sup: float
    updated_count: int
    skipped_count: int
    fallback_count: int


@dataclass(frozen=True)
class DppResult:
    field: GridField
    residual_history: tuple
    iterations: int
    converged: bool


def _check_geometry(grid, cfg):
    if cfg.radius < 2.0 * grid.h:
        raise ConfigError(
            f"radius {cfg.radius} must be at least two lattice steps "
            f"(h = {grid.h}); the circle would see too few cells"
        )
    if grid.strip_cells < strip_cells_for(cfg.radius, grid.h):
        raise ConfigError(
            f"strip of {grid.strip_cells} cells cannot contain circles of "
            f"radius {cfg.radius} at step {grid.h}; need "
            f"{strip_cells_for(cfg.radius, grid.h)}"
        )


def dpp_step(grid, d, cfg):
    """One damped sweep of the pair-mean map over all interior nodes.

    Returns the updated grid and diagnostics.  The sup residual is the
    largest undamped update ``|mean - value|`` over nodes actually computed.
    A node counts as degenerate only when its value and its whole sampling
    circle lie below the zero floor; such nodes are skipped or frozen per
    the policy and do not contribute.  A merely zero-valued node with
    nonzero circle samples still has a well-posed update and is computed.
    """
    _check_geometry(grid, cfg)
    interior = grid.interior_mask()
    frozen = (
        grid.frozen.copy()
        if grid.frozen is not None
        else np.zeros_like(interior)
    )
    angles = 2.0 * np.pi * np.arange(cfg.node_count) / cfg.node_count
    offsets = cfg.radius * np.exp(1j * angles)
    near_zero = (np.abs(grid.values) < cfg.zero_floor) & interior & ~frozen
    dead = np.zeros_like(near_zero)
    if np.any(near_zero):
        circle = interpolate(
            grid, grid.points()[near_zero][:, None] + offsets[None, :]
        )
        dead[near_zero] = np.max(np.abs(circle), axis=1) < cfg.zero_floor
    if cfg.zero_policy == "freeze":
        frozen = frozen | dead
        active = interior & ~frozen
    else:
        active = interior & ~frozen & ~dead
    skipped = int(np.count_nonzero(interior & ~active))

    new_values = grid.values.copy()
    if not np.any(active):
        out = replace(
            grid,
            values=new_values,
            frozen=frozen if cfg.zero_policy == "freeze" else grid.frozen,
        )
        return out, StepDiagnostics(0.0, 0, skipped, 0)

    centers = grid.points()[active]
    nodes = centers[:, None] + offsets[None, :]
    samples = interpolate(grid, nodes)
    if not np.all(np.isfinite(samples)):
        raise NonFiniteSampleError("interpolated circle samples are not finite")
    weights = np.full(cfg.node_count, 2.0 * np.pi * cfg.radius / cfg.node_count)

    ones = np.ones_like(offsets)
    init_a = samples.mean(axis=1)
    res_a = fit_model_coefficient(d, samples, weights, ones, init_a, cfg.solver)

    model_b = np.conj(offsets)
    init_b = (samples * offsets).sum(axis=1) * weights[0] / (
        2.0 * np.pi * cfg.radius**3
    )
    res_b = fit_model_coefficient(d, samples, weights, model_b, init_b, cfg.solver)

    mean = res_a["minimizer"] + cfg.radius * res_b["minimizer"]
    bad = (res_a["status"] == 3) | (res_b["status"] == 3)
    fallback = int(np.count_nonzero((res_a["status"] == 2) | (res_b["status"] == 2)))
    old = grid.values[active]
    if np.any(bad):
        mean = np.where(bad, old, mean)
    residual_sup = float(np.max(np.abs(mean - old))) if mean.size else 0.0
    new_values[active] = (1.0 - cfg.damping) * old + cfg.damping * mean

    out = replace(
        grid,
        values=new_values,
        frozen=frozen if cfg.zero_policy == "freeze" else grid.frozen,
    )
    return out, StepDiagnostics(
        residual_sup=residual_sup,
        updated_count=int(np.count_nonzero(active) - np.count_nonzero(bad)),
        skipped_count=skipped + int(np.count_nonzero(bad)),
        fallback_count=fallback,
    )


def dpp_solve(grid, d, cfg, callback=None):
    """Damped fixed-point iteration until the sup update is small.

    Raises :class:`DivergenceError` (with the residual history attached)
    when the residual grows by ``divergence_factor`` over a window, instead
    of looping to the iteration cap.  ``callback(iteration, grid, diag)``
    runs after every sweep when given.
    """
    _check_geometry(grid, cfg)
    history = []
    current = grid
    converged = False
    for it in range(1, cfg.max_iterations + 1):
        current, diag = dpp_step(current, d, cfg)
        history.append(diag.residual_sup)
        if callback is not None:
            callback(it, current, diag)
        if diag.residual_sup <= cfg.residual_tol:
            converged = True
            break
        w = cfg.divergence_window
        if len(history) > w and history[-1] > cfg.divergence_factor * history[-1 - w]:
            raise DivergenceError(
                f"sup residual grew from {history[-1 - w]:.3e} to "
                f"{history[-1]:.3e} over {w} sweeps",
                history=tuple(history),
            )
    return DppResult(
        field=current,
        residual_history=tuple(history),
        iterations=len(history),
        converged=converged,
    )


def write_checkpoint(grid, path, extra_header=()):
    """Write the lattice to CSV with x, y, re, im, flag columns.

    Flags: 0 strip data, 1 interior unknown, 2 frozen.  Lattice metadata
    rides along in '#' comment lines so the file round-trips;
    ``extra_header`` lines are prepended the same way.
    """
    interior = grid.interior_mask()
    frozen = (
        grid.frozen
        if grid.frozen is not None
        else np.zeros_like(interior)
    )
    nx, ny = grid.shape
    with open(path, "w", newline="") as fh:
        for line in extra_header:
            fh.write(f"# {line}\n")
        fh.write(
            f"# lattice x0={grid.x0:.17g} x1={grid.x1:.17g} "
            f"y0={grid.y0:.17g} y1={grid.y1:.17g} h={grid.h:.17g} "
            f"strip={grid.strip_cells}\n"
        )
        fh.write("x,y,re,im,flag\n")
        writer = csv.writer(fh, lineterminator="\n")
        pts = grid.points()
        for j in range(ny):
            for i in range(nx):
                flag = 2 if frozen[j, i] else (1 if interior[j, i] else 0)
                v = grid.values[j, i]
                writer.writerow(
                    [
                        f"{pts[j, i].real:.17g}",
                        f"{pts[j, i].imag:.17g}",
                        f"{v.real:.17g}",
                        f"{v.imag:.17g}",
                        flag,
                    ]
                )


def read_checkpoint(path):
    """Rebuild a grid from a checkpoint written by :func:`write_checkpoint`."""
    meta = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if line.startswith("# lattice"):
                    for tokenline in line[len("# lattice") :].split():
                        key, _, val = tokenline.partition("=")
                        meta[key] = float(val) if key != "strip" else int(val)
                continue
            if line == "x,y,re,im,flag":
                continue
            rows.append(line.split(","))
    required = {"x0", "x1", "y0", "y1", "h", "strip"}
    if not required.issubset(meta):
        raise InvalidParameterError(
            f"checkpoint {path} is missing lattice metadata {sorted(required - set(meta))}"
        )
    s = int(meta["strip"])
    nx = int(round((meta["x1"] - meta["x0"]) / meta["h"])) + 1 + 2 * s
    ny = int(round((meta["y1"] - meta["y0"]) / meta["h"])) + 1 + 2 * s
    g = GridField(
        x0=meta["x0"],
        x1=meta["x1"],
        y0=meta["y0"],
        y1=meta["y1"],
        h=meta["h"],
        strip_cells=s,
        values=np.zeros((ny, nx), dtype=complex),
    )
    if len(rows) != nx * ny:
        raise InvalidParameterError(
            f"checkpoint {path} has {len(rows)} rows, lattice needs {nx * ny}"
        )
    values = np.zeros((ny, nx), dtype=complex)
    frozen = np.zeros((ny, nx), dtype=bool)
    k = 0
    for j in range(ny):
        for i in range(nx):
            x, y, re, im, flag = rows[k]
            values[j, i] = complex(float(re), float(im))
            frozen[j, i] = int(flag) == 2
            k += 1
    return replace(g, values=values, frozen=frozen if frozen.any() else None)
