"""Batch command-line front end.

Every table carries exact "p/q" columns; columns ending in ``_approx`` are
decimal renderings for plotting and are not authoritative.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import click

from . import filtration as fl
from . import measures as ms
from . import multiplicity as mu
from . import okounkov as ok
from .errors import DimensionMismatch, InvalidInput, MonofiltError, ParseError
from .rational import fmt, frac
from .serialize import dumps, filtration_to_json, ideal_to_json, jsonable, loads_filtration

DEFAULTS = {"seed": 0, "tolerance": "1/1000000", "dim_cap": 4, "m_schedule": None, "grid": None}


def _approx(q) -> str:
    return f"{float(q):.12g}"


def parse_schedule(text: str) -> list[int]:
    try:
        ms_ = [int(s) for s in text.replace(" ", "").split(",") if s]
    except ValueError as exc:
        raise ParseError(f"bad m-schedule {text!r}") from exc
    if not ms_ or any(m < 1 for m in ms_):
        raise ParseError("m-schedule needs positive integers")
    return ms_


def parse_vector(text: str) -> tuple[Fraction, ...]:
    return tuple(frac(s) for s in text.split(",") if s.strip())


def read_config(path: str | None) -> dict:
    """key = value lines; '#' starts a comment."""
    cfg = dict(DEFAULTS)
    if not path:
        return cfg
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise ParseError(f"{path}:{lineno}: unknown key {key!r}")
        cfg[key] = value
    return cfg


@dataclass
class Job:
    command: str
    seed: int
    fmt: str
    out: str | None
    dim: int | None
    dim_cap: int
    workers: int
    schedule: list[int] | None
    grid: int | None
    tolerance: Fraction
    rows: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def load(self, path: str):
        F = loads_filtration(Path(path).read_text())
        if self.dim is not None and F.dim != self.dim:
            raise DimensionMismatch(f"{path} has dimension {F.dim}, expected {self.dim}")
        if F.dim > self.dim_cap:
            raise InvalidInput(f"{path} has dimension {F.dim} above the cap {self.dim_cap}")
        return F

    def pmap(self, fn, items):
        items = list(items)
        if self.workers <= 1 or len(items) <= 1:
            return [fn(x) for x in items]
        with ProcessPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(fn, items))

    def render(self) -> str:
        meta = {"command": self.command, "seed": self.seed}
        if self.fmt == "json":
            return json.dumps(jsonable({**meta, "summary": self.summary, "rows": self.rows}), indent=2, sort_keys=True) + "\n"
        buf = io.StringIO()
        buf.write(f"# command={self.command} seed={self.seed}\n")
        buf.write("# columns ending in _approx are decimal renderings, not authoritative\n")
        for k, v in self.summary.items():
            buf.write(f"# {k}={_cell(v)}\n")
        if self.rows:
            writer = csv.DictWriter(buf, fieldnames=list(self.rows[0]), lineterminator="\n")
            writer.writeheader()
            for row in self.rows:
                writer.writerow({k: _cell(v) for k, v in row.items()})
        return buf.getvalue()

    def emit(self):
        text = self.render()
        if self.out:
            out = Path(self.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{self.command}.{self.fmt}").write_text(text)
        else:
            click.echo(text, nl=False)


def _cell(v) -> str:
    if isinstance(v, Fraction):
        return fmt(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list)):
        return dumps(jsonable(v))
    return str(v)


@click.group()
@click.option("--format", "out_format", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Write <command>.<format> into this directory.")
@click.option("--seed", type=int, default=None, help="Random seed (recorded in every output).")
@click.option("--dim", type=int, default=None, help="Expected dimension of every descriptor.")
@click.option("--parallel", type=int, default=1, show_default=True, help="Worker processes for grid evaluation.")
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None, help="key = value defaults file.")
@click.pass_context
def cli(ctx, out_format, out, seed, dim, parallel, config):
    """Exact multiplicities, geodesics and measures for monomial filtrations."""
    cfg = read_config(config)
    ctx.obj = Job(
        command=ctx.invoked_subcommand or "",
        seed=int(cfg["seed"]) if seed is None else seed,
        fmt=out_format,
        out=out,
        dim=dim,
        dim_cap=int(cfg["dim_cap"]),
        workers=max(1, parallel),
        schedule=parse_schedule(cfg["m_schedule"]) if cfg["m_schedule"] else None,
        grid=int(cfg["grid"]) if cfg["grid"] else None,
        tolerance=frac(str(cfg["tolerance"])),
    )


def _job(ctx) -> Job:
    return ctx.obj


def _schedule(job: Job, text: str | None, default: list[int]) -> list[int]:
    if text:
        return parse_schedule(text)
    return job.schedule or default


@cli.command()
@click.argument("f", type=click.Path(exists=True, dir_okay=False))
@click.option("--m-schedule", default=None, help="Comma-separated levels m.")
@click.pass_context
def mult(ctx, f, m_schedule):
    """Multiplicity of a filtration with e(a_m)/m^n estimates."""
    job = _job(ctx)
    F = job.load(f)
    sched = _schedule(job, m_schedule, list(mu.default_schedule(F.dim)))
    res = mu.mult_filtration(F, [])
    est = job.pmap(_mult_estimate, [(F, m) for m in sched])
    job.summary = {"exact": res.exact, "exact_approx": _approx(res.exact), "n": F.dim}
    best = None
    for m, v in zip(sched, est):
        best = v if best is None else min(best, v)
        job.rows.append({"m": m, "estimate": v, "running_inf": best, "estimate_approx": _approx(v)})
    job.emit()


def _mult_estimate(args):
    F, m = args
    return mu.mult_ideal(fl.evaluate(F, m)) / Fraction(m) ** F.dim


@cli.command()
@click.argument("f", type=click.Path(exists=True, dir_okay=False))
@click.option("--lambda", "lam", required=True, help="Positive rational p/q.")
@click.pass_context
def saturate(ctx, f, lam):
    """Lattice points of lambda times the limit body."""
    job = _job(ctx)
    F = job.load(f)
    lam = frac(lam)
    I = fl.saturate(F, lam)
    job.summary = {"lambda": lam, "ideal": ideal_to_json(I)}
    job.rows = [{"generator": list(g)} for g in sorted(I.gens)]
    job.emit()


@cli.command("geodesic-scan")
@click.argument("f", type=click.Path(exists=True, dir_okay=False))
@click.argument("g", type=click.Path(exists=True, dir_okay=False))
@click.option("--grid", type=int, default=None, help="Number of grid points on [0, 1].")
@click.pass_context
def geodesic_scan(ctx, f, g, grid):
    """E(t) on a grid with the concavity and linearity verdicts."""
    job = _job(ctx)
    F, G = job.load(f), job.load(g)
    points = grid or job.grid or 9
    ts = mu._grid(points)
    values = job.pmap(_geodesic_E, [(F, G, t) for t in ts])
    scan = mu._scan(ts, values, F.dim, fl.proportionality(F, G) is not None)
    table = mu.chord_table(scan)
    job.summary = {"concave": scan.concave, "linear": scan.linear, "proportional": scan.proportional, "n": F.dim}
    for row in table:
        job.rows.append(
            {
                "t": row["t"],
                "E": row["value"],
                "E_approx": _approx(row["value"]),
                "E_root_approx": f"{row['root']:.12g}",
                "chord_approx": f"{row['chord']:.12g}",
                "above_chord": row["sign"] >= 0,
            }
        )
    job.emit()


def _geodesic_E(args):
    return mu.geodesic_E(*args)


def _report(job: Job, report, extra: dict):
    job.summary = {**{k: v for k, v in vars(report).items()}, **extra}
    job.emit()


@cli.command()
@click.argument("f", type=click.Path(exists=True, dir_okay=False))
@click.argument("g", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def minkowski(ctx, f, g):
    """Minkowski inequality for the product filtration."""
    job = _job(ctx)
    r = mu.minkowski_check(job.load(f), job.load(g))
    _report(job, r, {"holds": r.holds, "consistent": r.consistent})


@cli.command()
@click.argument("f", type=click.Path(exists=True, dir_okay=False))
@click.argument("g", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def rees(ctx, f, g):
    """Equal multiplicity against equal saturation for F inside G."""
    job = _job(ctx)
    r = mu.rees_check(job.load(f), job.load(g))
    _report(job, r, {"not_nested": r.not_nested, "consistent": r.consistent})


@cli.command()
@click.argument("f", type=click.Path(exists=True, dir_okay=False))
@click.argument("g", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def equiv(ctx, f, g):
    """Equivalence through the three multiplicities e(F), e(F cap G), e(G)."""
    job = _job(ctx)
    r = mu.equivalence_check(job.load(f), job.load(g))
    _report(job, r, {"equivalent": r.equivalent, "consistent": r.consistent})


@cli.command()
@click.argument("f", type=click.Path(exists=True, dir_okay=False))
@click.argument("g", type=click.Path(exists=True, dir_okay=False))
@click.option("--m-schedule", default=None, help="Comma-separated levels m.")
@click.option("--t", "t", default="1/2", show_default=True, help="Halfplane parameter.")
@click.pass_context
def measure(ctx, f, g, m_schedule, t):
    """Discrete measures mu_m against the limit measure on a halfplane."""
    job = _job(ctx)
    F, G = job.load(f), job.load(g)
    t = frac(t)
    sched = _schedule(job, m_schedule, [10, 20, 40, 80, 160])
    exact = ms.GeodesicMeasure(F, G).halfplane(t)
    rows = job.pmap(_measure_row, [(F, G, t, m) for m in sched])
    job.summary = {"t": t, "exact": exact, "exact_approx": _approx(exact)}
    for m, (mass, ident, atoms) in zip(sched, rows):
        job.rows.append(
            {
                "m": m,
                "mu_m_halfplane": mass,
                "colength_identity": ident,
                "identity_ok": mass == ident,
                "atoms": atoms,
                "rel_err_approx": _approx(abs(mass - exact) / exact),
            }
        )
    job.emit()


def _measure_row(args):
    F, G, t, m = args
    meas = ms.mu_m(F, G, m)
    return meas.halfplane(t), ms.halfplane_identity(F, G, t, m), len(meas.atoms)


@cli.command()
@click.argument("f", type=click.Path(exists=True, dir_okay=False))
@click.argument("g", type=click.Path(exists=True, dir_okay=False))
@click.option("--grid", type=int, default=None, help="Number of t values on [0, 1].")
@click.pass_context
def segment(ctx, f, g, grid):
    """The segment measure and its integral representation of E(t)."""
    job = _job(ctx)
    F, G = job.load(f), job.load(g)
    meas = ms.GeodesicMeasure(F, G)
    lo, hi = meas.support()
    job.summary = {"support_lo": lo, "support_hi": hi, "total_mass": meas.tilde_cdf(1), "breakpoints": meas.slice_values}
    for t in mu._grid(grid or job.grid or 9):
        exact = mu.geodesic_E(F, G, t)
        val, err = meas.E_via_segment(t)
        job.rows.append(
            {
                "t": t,
                "E_exact": exact,
                "E_segment_approx": f"{val:.12g}",
                "abs_err_approx": f"{abs(val - float(exact)):.3g}",
                "quad_err_approx": f"{err:.3g}",
                "within_tolerance": abs(val - float(exact)) <= float(job.tolerance) * float(exact),
            }
        )
    job.emit()


@cli.command()
@click.argument("f", type=click.Path(exists=True, dir_okay=False))
@click.argument("g", type=click.Path(exists=True, dir_okay=False))
@click.option("--t", "t", default="1/2", show_default=True)
@click.option("--m-schedule", default=None, help="Comma-separated levels m.")
@click.pass_context
def okounkov(ctx, f, g, t, m_schedule):
    """Semigroup truncation estimates of E(t) with the counting identity."""
    job = _job(ctx)
    F, G = job.load(f), job.load(g)
    t = frac(t)
    sched = _schedule(job, m_schedule, [1, 2, 4, 8, 16, 32, 64])
    exact = mu.geodesic_E(F, G, t)
    truncs = job.pmap(_truncation, [(F, G, t, m) for m in sched])
    job.summary = {"t": t, "exact": exact}
    for tr in truncs:
        job.rows.append(
            {
                "m": tr.m,
                "count_identity_ok": tr.identity_ok,
                "vol_delta": tr.vol_delta,
                "vol_delta_t": tr.vol_delta_t,
                "estimate": tr.estimate,
                "exact": exact,
                "rel_err_approx": _approx(abs(tr.estimate - exact) / exact),
            }
        )
    job.emit()


def _truncation(args):
    return ok.truncation(*args)


@cli.command()
@click.argument("alpha")
@click.argument("beta")
@click.option("--grid", type=int, default=None, help="Number of grid points on [0, 1].")
@click.pass_context
def volconv(ctx, alpha, beta, grid):
    """vol(v_w)^(-1/n) along the segment between two weight vectors."""
    job = _job(ctx)
    a, b = parse_vector(alpha), parse_vector(beta)
    if len(a) != len(b):
        raise DimensionMismatch("weight vectors of different length")
    if job.dim is not None and len(a) != job.dim:
        raise DimensionMismatch(f"weights have length {len(a)}, expected {job.dim}")
    try:
        scan = mu.volume_convexity_scan(a, b, grid or job.grid or 16)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc
    job.summary = {"concave": scan.concave, "linear": scan.linear, "proportional": scan.proportional, "n": len(a)}
    for row in mu.chord_table(scan):
        job.rows.append(
            {
                "t": row["t"],
                "vol": row["value"],
                "root_approx": f"{row['root']:.12g}",
                "chord_approx": f"{row['chord']:.12g}",
                "above_chord": row["sign"] >= 0,
            }
        )
    job.emit()


@cli.command()
@click.argument("f", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def canon(ctx, f):
    """Print the canonical form of a descriptor."""
    job = _job(ctx)
    click.echo(dumps(filtration_to_json(job.load(f))))


def _fail(kind: str, message: str, code: int):
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    sys.exit(code)


def main(argv=None):
    try:
        cli.main(args=argv, prog_name="monofilt", standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        _fail("Abort", "aborted", 1)
    except click.ClickException as exc:
        _fail(type(exc).__name__, exc.format_message(), 2)
    except MonofiltError as exc:
        _fail(type(exc).__name__, str(exc), exc.exit_code)
    except (ValueError, ZeroDivisionError) as exc:
        _fail(type(exc).__name__, str(exc), 3)
    except OSError as exc:
        _fail(type(exc).__name__, str(exc), 2)


if __name__ == "__main__":
    main()
