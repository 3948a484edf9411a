"""Command line interface: scenario files in, CSV out, exit codes honoured.

Usage::

    holomeans <command> --config <path> [--out <path>] [--seed <int>]

Commands: ``mean``, ``sweep``, ``verify-holo``, ``verify-system``,
``verify-amvp``, ``contact``, ``dpp``, ``validate-density``.

The scenario file is a flat ``section.key = value`` text format; ``#``
starts a comment.  Every run logs its resolved configuration into the CSV
as ``#`` comment lines, so an output file documents how it was produced.
Runs are deterministic: the same scenario file yields byte-identical CSV.

Exit codes: 0 when every verdict passes (or every solve converges), 1 when
a verdict fails, is inconclusive, or an iteration diverges (rows mark
which), 2 for configuration problems, reported with a line diagnostic.
"""

from __future__ import annotations

import argparse
import io
import sys

import numpy as np

from .asymptotics import (
    SweepConfig,
    ToleranceConfig,
    amvp_verdict,
    extrapolate,
    holomorphy_verdict,
    sweep,
    system_verdict,
)
from .contact import contact_solution_verdict
from .density import power_density, validate_density
from .dpp import (
    DppConfig,
    dpp_solve,
    grid_from_function,
    with_interior,
    write_checkpoint,
)
from .errors import ConfigError, DivergenceError, HolomeansError
from .fields import make_field, parse_complex
from .means import (
    SolverConfig,
    center_circle_mean,
    conjugate_transformed_mean,
    infinity_mean,
    pair_mean,
    variational_circle_mean,
)

__all__ = ["main", "load_scenario", "parse_density_spec"]

COMMANDS = (
    "mean",
    "sweep",
    "verify-holo",
    "verify-system",
    "verify-amvp",
    "contact",
    "dpp",
    "validate-density",
)


def parse_density_spec(text):
    """Build a density from a spec such as ``power:p=3``."""
    text = str(text).strip()
    name, _, argtext = text.partition(":")
    name = name.strip()
    if name != "power":
        raise ConfigError(
            f"unknown density {name!r}; built-in densities: power:p=<real>"
        )
    params = {}
    for chunk in argtext.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        key, eq, val = chunk.partition("=")
        if not eq:
            raise ConfigError(f"density parameter {chunk!r} is not key=value")
        params[key.strip()] = val.strip()
    if set(params) != {"p"}:
        raise ConfigError(
            f"density 'power' takes exactly the parameter p, got {sorted(params) or 'none'}"
        )
    try:
        p = float(params["p"])
    except ValueError as exc:
        raise ConfigError(f"density parameter p={params['p']!r} is not a number") from exc
    try:
        return power_density(p)
    except HolomeansError as exc:
        raise ConfigError(str(exc)) from exc


class Scenario:
    """Parsed flat key-value scenario with consumption tracking."""

    def __init__(self, entries, lines):
        self._entries = dict(entries)
        self._lines = dict(lines)
        self._used = set()

    def resolved(self):
        return tuple(sorted(self._entries.items()))

    def _fail(self, key, message):
        where = f"line {self._lines[key]}: " if key in self._lines else ""
        raise ConfigError(f"{where}{key}: {message}")

    def take(self, key, cast=str, default=None, required=False):
        if key not in self._entries:
            if required:
                raise ConfigError(f"missing required key {key!r}")
            return default
        self._used.add(key)
        raw = self._entries[key]
        try:
            return cast(raw)
        except ConfigError as exc:
            self._fail(key, str(exc))
        except (ValueError, TypeError) as exc:
            self._fail(key, f"cannot parse {raw!r} ({exc})")

    def finish(self):
        unused = sorted(set(self._entries) - self._used)
        if unused:
            spots = ", ".join(
                f"{k!r} (line {self._lines[k]})" for k in unused
            )
            raise ConfigError(f"unknown keys for this command: {spots}")


def load_scenario(path):
    """Parse a flat ``key = value`` scenario file with line diagnostics."""
    entries, lines = {}, {}
    try:
        with open(path) as fh:
            raw_lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    for no, raw in enumerate(raw_lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise ConfigError(f"line {no}: expected 'key = value', got {raw.strip()!r}")
        key = key.strip()
        value = value.strip()
        if not key or " " in key:
            raise ConfigError(f"line {no}: bad key {key!r}")
        if not value:
            raise ConfigError(f"line {no}: key {key!r} has an empty value")
        if key in entries:
            raise ConfigError(
                f"line {no}: duplicate key {key!r} (first set on line {lines[key]})"
            )
        entries[key] = value
        lines[key] = no
    return Scenario(entries, lines)


def _as_points(text):
    pts = [parse_complex(tok) for tok in str(text).split(";") if tok.strip()]
    if not pts:
        raise ValueError("no points given")
    return pts


def _grid_points(text):
    parts = [tok.strip() for tok in str(text).split(",")]
    if len(parts) != 6:
        raise ValueError("grid spec needs x0,x1,nx,y0,y1,ny")
    x0, x1, y0, y1 = float(parts[0]), float(parts[1]), float(parts[3]), float(parts[4])
    nx, ny = int(parts[2]), int(parts[5])
    if nx < 1 or ny < 1:
        raise ValueError("grid counts must be positive")
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    return [complex(x, y) for y in ys for x in xs]


def _take_points(sc):
    pts = sc.take("points.list", cast=_as_points)
    gpts = sc.take("points.grid", cast=_grid_points)
    if pts is not None and gpts is not None:
        raise ConfigError("give either points.list or points.grid, not both")
    if pts is None and gpts is None:
        raise ConfigError("missing points: set points.list or points.grid")
    return pts if pts is not None else gpts


def _take_solver(sc):
    kwargs = {}
    for name, cast in (
        ("max_iterations", int),
        ("foc_tol_coeff", float),
        ("armijo_slope", float),
        ("backtrack_factor", float),
        ("max_backtracks", int),
        ("residual_floor", float),
        ("fallback_move_tol", float),
        ("fallback_max_cycles", int),
    ):
        val = sc.take(f"solver.{name}", cast=cast)
        if val is not None:
            kwargs[name] = val
    return SolverConfig(**kwargs)


def _take_sweep(sc, seed, solver):
    kwargs = {"solver": solver, "seed": seed}
    for name, cast in (
        ("r0", float),
        ("rho", float),
        ("count", int),
        ("node_count", int),
        ("min_successes", int),
    ):
        key = "nodes" if name == "node_count" else name
        val = sc.take(f"sweep.{key}", cast=cast)
        if val is not None:
            kwargs[name] = val
    try:
        return SweepConfig(**kwargs)
    except HolomeansError as exc:
        raise ConfigError(str(exc)) from exc


def _take_tol(sc):
    kwargs = {}
    for name in (
        "limit_tol",
        "fit_tol_coeff",
        "residual_tol",
        "match_tol",
        "amvp_tol",
        "field_floor",
    ):
        val = sc.take(f"tol.{name}", cast=float)
        if val is not None:
            kwargs[name] = val
    return ToleranceConfig(**kwargs)


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _emit(out_path, header_lines, columns, rows):
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    text = buf.getvalue()
    if out_path is None:
        sys.stdout.write(text)
    else:
        try:
            with open(out_path, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write output {out_path!r}: {exc}") from exc


def _header(command, seed, sc):
    lines = [f"command = {command}", f"seed = {seed}"]
    lines.extend(f"{k} = {v}" for k, v in sc.resolved())
    return lines


MEAN_KINDS = ("variational", "center", "conjugate", "pair", "infinity")


def _cmd_mean(sc, seed, out):
    kind = sc.take("mean.kind", default="variational")
    if kind not in MEAN_KINDS:
        raise ConfigError(f"mean.kind must be one of {MEAN_KINDS}, got {kind!r}")
    field = sc.take("field.spec", cast=make_field, required=True)
    z = sc.take("mean.point", cast=parse_complex, required=True)
    r = sc.take("mean.r", cast=float, required=True)
    nodes = sc.take("mean.nodes", cast=int, default=64)
    solver = _take_solver(sc)
    density = None
    if kind != "infinity":
        density = sc.take("density.spec", cast=parse_density_spec, required=True)

    header = _header("mean", seed, sc)
    sc.finish()
    if r <= 0:
        raise ConfigError(f"mean.r must be positive, got {r}")

    if kind == "pair":
        res = pair_mean(field, z, r, density, nodes, solver)
        columns = (
            "r",
            "re_a",
            "im_a",
            "re_b",
            "im_b",
            "re_value",
            "im_value",
            "status",
        )
        status = (
            "failed"
            if "failed" in (res.center.status, res.slope.status)
            else (
                "fallback_used"
                if "fallback_used" in (res.center.status, res.slope.status)
                else "converged"
            )
        )
        rows = [
            (
                r,
                res.center.minimizer.real,
                res.center.minimizer.imag,
                res.slope.minimizer.real,
                res.slope.minimizer.imag,
                res.value.real,
                res.value.imag,
                status,
            )
        ]
        ok = status != "failed"
    elif kind == "infinity":
        res = infinity_mean(field, z, r, nodes, seed)
        columns = ("r", "re_c", "im_c", "objective", "support_count", "status")
        rows = [
            (
                r,
                res.minimizer.real,
                res.minimizer.imag,
                res.objective,
                res.support_count,
                res.status,
            )
        ]
        ok = res.status != "failed"
    else:
        fn = {
            "variational": variational_circle_mean,
            "center": center_circle_mean,
            "conjugate": conjugate_transformed_mean,
        }[kind]
        res = fn(field, z, r, density, nodes, solver)
        columns = ("r", "re_c", "im_c", "foc_residual", "status")
        rows = [
            (r, res.minimizer.real, res.minimizer.imag, res.foc_residual, res.status)
        ]
        ok = res.status != "failed"
    _emit(out, header, columns, rows)
    return 0 if ok else 1


def _cmd_sweep(sc, seed, out):
    kind = sc.take("sweep.kind", default="variational")
    field = sc.take("field.spec", cast=make_field, required=True)
    z = sc.take("sweep.point", cast=parse_complex, required=True)
    solver = _take_solver(sc)
    cfg = _take_sweep(sc, seed, solver)
    density = None
    if kind != "infinity":
        density = sc.take("density.spec", cast=parse_density_spec, required=True)
    tol = _take_tol(sc)
    header = _header("sweep", seed, sc)
    sc.finish()

    result = sweep(kind, field, z, density, cfg)
    est = extrapolate(result, tol)
    header.extend(
        [
            f"limit_re = {_fmt(est.limit.real)}",
            f"limit_im = {_fmt(est.limit.imag)}",
            f"slope_re = {_fmt(est.slope.real)}",
            f"slope_im = {_fmt(est.slope.imag)}",
            f"fit_residual = {_fmt(est.fit_residual)}",
            f"verdict = {est.verdict}",
        ]
    )

    failed = dict()
    for r, reason in result.failures:
        failed[r] = reason
    by_radius = dict(zip(result.radii, zip(result.values, result.statuses, result.extras)))

    columns = ("r", "re_c", "im_c", "foc_residual", "status")
    if kind == "infinity":
        columns = columns + ("support_count",)
    rows = []
    for r in cfg.radii():
        r = float(r)
        if r in by_radius:
            value, status, extra = by_radius[r]
            foc = extra.get("foc_residual", float("nan"))
            row = (r, value.real, value.imag, foc, status)
            if kind == "infinity":
                row = row + (extra.get("support_count", 0),)
        else:
            row = (r, float("nan"), float("nan"), float("nan"), "failed")
            if kind == "infinity":
                row = row + (0,)
        rows.append(row)
    _emit(out, header, columns, rows)
    return 0 if not result.failures else 1


def _verdict_rows(command, points, worker):
    """Run a per-point verdict worker, catching per-point failures."""
    rows = []
    all_pass = True
    for z in points:
        try:
            row, passed = worker(z)
        except HolomeansError as exc:
            rows.append(
                (
                    z.real,
                    z.imag,
                    "error",
                    float("nan"),
                    float("nan"),
                    float("nan"),
                )
                + (f"{type(exc).__name__}",)
            )
            all_pass = False
            continue
        rows.append(row)
        all_pass = all_pass and passed
    return rows, all_pass


def _cmd_verify_holo(sc, seed, out):
    field = sc.take("field.spec", cast=make_field, required=True)
    density = sc.take("density.spec", cast=parse_density_spec, required=True)
    points = _take_points(sc)
    solver = _take_solver(sc)
    cfg = _take_sweep(sc, seed, solver)
    tol = _take_tol(sc)
    header = _header("verify-holo", seed, sc)
    sc.finish()

    def worker(z):
        v = holomorphy_verdict(field, z, density, cfg, tol)[0]
        if v.verdict == "untestable":
            nan = float("nan")
            return (
                z.real, z.imag, v.verdict,
                nan, nan, nan, nan, nan, nan, False,
            ), False
        row = (
            z.real,
            z.imag,
            v.verdict,
            v.estimate.limit.real,
            v.estimate.limit.imag,
            v.estimate.fit_residual,
            v.predicted_limit.real,
            v.predicted_limit.imag,
            v.prediction_gap,
            v.consistent,
        )
        return row, v.verdict == "holomorphic"

    columns = (
        "x",
        "y",
        "verdict",
        "limit_re",
        "limit_im",
        "fit_residual",
        "predicted_re",
        "predicted_im",
        "prediction_gap",
        "consistent",
    )
    rows, all_pass = _verdict_rows("verify-holo", points, worker)
    rows = [_pad(row, len(columns)) for row in rows]
    _emit(out, header, columns, rows)
    return 0 if all_pass else 1


def _pad(row, width):
    return row + ("",) * (width - len(row))


def _cmd_verify_system(sc, seed, out):
    field = sc.take("field.spec", cast=make_field, required=True)
    density = sc.take("density.spec", cast=parse_density_spec, required=True)
    points = _take_points(sc)
    solver = _take_solver(sc)
    cfg = _take_sweep(sc, seed, solver)
    tol = _take_tol(sc)
    header = _header("verify-system", seed, sc)
    sc.finish()

    def worker(z):
        v = system_verdict(field, z, density, cfg, tol)[0]
        if v.status == "untestable":
            nan = float("nan")
            return (
                z.real, z.imag, v.status,
                nan, nan, nan, nan, nan, False,
            ), False
        row = (
            z.real,
            z.imag,
            v.status,
            v.estimate.limit.real,
            v.estimate.limit.imag,
            v.estimate.fit_residual,
            v.analytic_residual.real,
            v.analytic_residual.imag,
            v.consistent,
        )
        return row, v.status == "satisfied"

    columns = (
        "x",
        "y",
        "verdict",
        "limit_re",
        "limit_im",
        "fit_residual",
        "residual_re",
        "residual_im",
        "consistent",
    )
    rows, all_pass = _verdict_rows("verify-system", points, worker)
    rows = [_pad(row, len(columns)) for row in rows]
    _emit(out, header, columns, rows)
    return 0 if all_pass else 1


def _cmd_verify_amvp(sc, seed, out):
    field = sc.take("field.spec", cast=make_field, required=True)
    density = sc.take("density.spec", cast=parse_density_spec, required=True)
    points = _take_points(sc)
    solver = _take_solver(sc)
    cfg = _take_sweep(sc, seed, solver)
    tol = _take_tol(sc)
    header = _header("verify-amvp", seed, sc)
    sc.finish()

    def worker(z):
        v = amvp_verdict(field, z, density, cfg, tol)[0]
        if v.status == "untestable":
            nan = float("nan")
            return (
                z.real, z.imag, v.status,
                nan, nan, nan, nan, nan, nan, False,
            ), False
        row = (
            z.real,
            z.imag,
            v.status,
            v.estimate.limit.real,
            v.estimate.limit.imag,
            v.estimate.fit_residual,
            v.bracket.real,
            v.bracket.imag,
            v.bracket_gap,
            v.consistent,
        )
        return row, v.status == "holds"

    columns = (
        "x",
        "y",
        "verdict",
        "limit_re",
        "limit_im",
        "fit_residual",
        "bracket_re",
        "bracket_im",
        "bracket_gap",
        "consistent",
    )
    rows, all_pass = _verdict_rows("verify-amvp", points, worker)
    rows = [_pad(row, len(columns)) for row in rows]
    _emit(out, header, columns, rows)
    return 0 if all_pass else 1


def _cmd_contact(sc, seed, out):
    field = sc.take("field.spec", cast=make_field, required=True)
    density = sc.take("density.spec", cast=parse_density_spec, required=True)
    points = _take_points(sc)
    directions = sc.take("contact.directions", cast=int, default=16)
    solver = _take_solver(sc)
    cfg = _take_sweep(sc, seed, solver)
    tol = _take_tol(sc)
    header = _header("contact", seed, sc)
    sc.finish()

    report = contact_solution_verdict(field, points, density, directions, cfg, tol)
    columns = (
        "x",
        "y",
        "verdict",
        "limit_re",
        "limit_im",
        "fit_residual",
        "xi_re",
        "xi_im",
        "envelope",
        "consistent",
    )
    rows = []
    for row in report.rows:
        rows.append(
            (
                row.point.real,
                row.point.imag,
                row.status,
                row.limit,
                0.0,
                row.fit_residual,
                row.xi.real,
                row.xi.imag,
                row.envelope,
                row.consistent,
            )
        )
    for z in report.untestable_points:
        rows.append(
            (
                z.real,
                z.imag,
                "untestable",
                float("nan"),
                float("nan"),
                float("nan"),
                float("nan"),
                float("nan"),
                float("nan"),
                False,
            )
        )
    header.extend(
        [
            f"camvp_pass = {_fmt(report.camvp_pass)}",
            f"envelope_pass = {_fmt(report.envelope_pass)}",
            f"residual_pass = {_fmt(report.residual_pass)}",
            f"consistent = {_fmt(report.consistent)}",
        ]
    )
    _emit(out, header, columns, rows)
    ok = report.camvp_pass and not report.untestable_points
    return 0 if ok else 1


def _cmd_dpp(sc, seed, out):
    field = sc.take("field.spec", cast=make_field, required=True)
    density = sc.take("density.spec", cast=parse_density_spec, required=True)
    x0 = sc.take("dpp.x0", cast=float, required=True)
    x1 = sc.take("dpp.x1", cast=float, required=True)
    y0 = sc.take("dpp.y0", cast=float, required=True)
    y1 = sc.take("dpp.y1", cast=float, required=True)
    h = sc.take("dpp.h", cast=float, required=True)
    radius = sc.take("dpp.radius", cast=float, required=True)
    init_spec = sc.take("dpp.init", default="field")
    solver = _take_solver(sc)
    kwargs = {"radius": radius, "solver": solver}
    for name, cast in (
        ("damping", float),
        ("max_iterations", int),
        ("residual_tol", float),
        ("zero_policy", str),
        ("zero_floor", float),
        ("divergence_window", int),
        ("divergence_factor", float),
    ):
        val = sc.take(f"dpp.{name}", cast=cast)
        if val is not None:
            kwargs[name] = val
    nodes = sc.take("dpp.nodes", cast=int)
    if nodes is not None:
        kwargs["node_count"] = nodes
    header = _header("dpp", seed, sc)
    sc.finish()

    try:
        cfg = DppConfig(**kwargs)
        grid = grid_from_function(x0, x1, y0, y1, h, radius, field)
    except HolomeansError as exc:
        raise ConfigError(str(exc)) from exc
    if init_spec != "field":
        if not init_spec.startswith("const:"):
            raise ConfigError(
                f"dpp.init must be 'field' or 'const:<complex>', got {init_spec!r}"
            )
        grid = with_interior(grid, parse_complex(init_spec[len("const:") :]))

    diverged = None
    try:
        result = dpp_solve(grid, density, cfg)
        final = result.field
        converged = result.converged
        iterations = result.iterations
        residuals = result.residual_history
    except DivergenceError as exc:
        diverged = str(exc)
        final = grid
        converged = False
        iterations = len(exc.history)
        residuals = exc.history

    header.extend(
        [
            f"iterations = {iterations}",
            f"converged = {_fmt(converged)}",
            f"final_residual = {_fmt(residuals[-1] if residuals else float('nan'))}",
        ]
    )
    if diverged:
        header.append(f"diverged = {diverged}")
    if out is None:
        for line in header:
            sys.stdout.write(f"# {line}\n")
    else:
        write_checkpoint(final, out, extra_header=header)
    return 0 if converged else 1


def _cmd_validate_density(sc, seed, out):
    density = sc.take("density.spec", cast=parse_density_spec, required=True)
    samples = sc.take("density.samples", cast=int, default=200)
    header = _header("validate-density", seed, sc)
    sc.finish()

    report = validate_density(density, samples)
    columns = ("check", "passed", "worst", "location", "message")
    rows = [
        (c.name, c.passed, c.worst, c.location, c.message) for c in report.checks
    ]
    header.append(f"ok = {_fmt(report.ok)}")
    _emit(out, header, columns, rows)
    return 0 if report.ok else 1


_HANDLERS = {
    "mean": _cmd_mean,
    "sweep": _cmd_sweep,
    "verify-holo": _cmd_verify_holo,
    "verify-system": _cmd_verify_system,
    "verify-amvp": _cmd_verify_amvp,
    "contact": _cmd_contact,
    "dpp": _cmd_dpp,
    "validate-density": _cmd_validate_density,
}


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="holomeans",
        description="Nonlinear variational circle means and their verdicts.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="scenario file (key = value)")
    parser.add_argument("--out", default=None, help="CSV output path (default stdout)")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed override")
    args = parser.parse_args(argv)

    try:
        sc = load_scenario(args.config)
        seed = args.seed if args.seed is not None else sc.take(
            "sweep.seed", cast=int, default=0
        )
        return _HANDLERS[args.command](sc, seed, args.out)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except HolomeansError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
