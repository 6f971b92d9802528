"""Command-line interface.

Usage::

    besselindex eval besselj-norm --n 0 --x 1
    besselindex eval kernel-omega --mu -0.5 --n 1..3 --x-grid 0.5:5:0.5 --format json
    besselindex transform synth --kind re --coeffs coeffs.json --x-grid 0:10:1
    besselindex transform analyze --kind re --profile 1-cos --n-max 4
    besselindex transform invert-fn --kind lommel --mu -0.5 --coeffs sin.json --x-grid 1:5:1
    besselindex verify identities --eq Eq2_4 --n 0..3 --u 0.5,1,2 --out report.json
    besselindex verify all

Tables have the columns ``index,x,value,err_est,status``.  Verification
suites write a JSON report ``{"header": {...}, "records": [...]}``.  The exit
status is 0 exactly when no row errored and no check failed.
"""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

import click
import numpy as np

from . import __version__, specfun, transforms, verify
from .exceptions import BesselIndexError
from .quad import QuadConfig
from .transforms import CoeffSeq, PeriodicProfile, TransformKind

__all__ = ["cli", "parse_grid", "parse_index_range", "Row"]

EVAL_FUNCTIONS = ("besselj-norm", "besselk", "lommel-s", "kernel-phi", "kernel-psi", "kernel-omega")
_KERNEL_KIND = {"kernel-phi": "re", "kernel-psi": "im", "kernel-omega": "lommel"}


@dataclass(frozen=True)
class Row:
    """One output row; `x` or `index` may be None when not applicable."""

    index: int | None
    x: float | None
    value: float
    err_est: float
    status: str = "ok"

    @property
    def failed(self) -> bool:
        return self.status.startswith("error")


def parse_grid(spec: str) -> list[float]:
    """Points of ``start:stop:step``, including `stop` when within half a step.

    Examples
    --------
    >>> parse_grid("0:1:0.25")
    [0.0, 0.25, 0.5, 0.75, 1.0]
    >>> parse_grid("1:2.1:0.5")
    [1.0, 1.5, 2.0]
    >>> parse_grid("3")
    [3.0]
    """
    parts = spec.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise click.BadParameter(f"malformed grid {spec!r}; expected start:stop:step")
    if len(vals) == 1:
        return vals
    if len(vals) != 3:
        raise click.BadParameter(f"malformed grid {spec!r}; expected start:stop:step")
    start, stop, step = vals
    if not (step > 0 and stop >= start and all(map(math.isfinite, vals))):
        raise click.BadParameter(f"grid {spec!r} needs step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 0.5)) + 1
    return [start + k * step for k in range(count)]


def parse_index_range(spec: str) -> list[int]:
    """Integers from ``"3"``, ``"0..4"`` (inclusive) or ``"1,2,5"``.

    Examples
    --------
    >>> parse_index_range("0..3")
    [0, 1, 2, 3]
    >>> parse_index_range("2,5")
    [2, 5]
    """
    try:
        if ".." in spec:
            lo, hi = spec.split("..")
            out = list(range(int(lo), int(hi) + 1))
        else:
            out = [int(v) for v in spec.split(",")]
    except ValueError:
        raise click.BadParameter(f"malformed index range {spec!r}")
    if not out or min(out) < 0:
        raise click.BadParameter(f"index range {spec!r} must be non-empty and non-negative")
    return out


def _parse_floats(spec: str) -> list[float]:
    try:
        return [float(v) for v in spec.split(",")]
    except ValueError:
        raise click.BadParameter(f"malformed list {spec!r}")


def _fmt(v) -> str:
    if v is None:
        return ""
    return str(v) if isinstance(v, int) else "%.17g" % v


def _json_num(v):
    if v is None or not math.isfinite(v):
        return None
    return float(v)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def render_rows(rows: Iterable[Row], fmt: str) -> str:
    """Serialize rows as CSV or JSON with full precision."""
    rows = list(rows)
    if fmt == "json":
        data = [{"index": r.index, "x": _json_num(r.x), "value": _json_num(r.value),
                 "err_est": _json_num(r.err_est), "status": r.status} for r in rows]
        return json.dumps(data, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "x", "value", "err_est", "status"])
    for r in rows:
        writer.writerow([_fmt(r.index), _fmt(r.x), _fmt(r.value), _fmt(r.err_est), r.status])
    return buf.getvalue()


def _finish(rows: list[Row], fmt: str, out: str | None) -> None:
    _emit(render_rows(rows, fmt), out)
    sys.exit(1 if any(r.failed for r in rows) else 0)


def _kind(kind: str, mu: float | None) -> TransformKind:
    if (kind == "lommel") != (mu is not None):
        raise click.UsageError("--mu is required for --kind lommel and only allowed there")
    try:
        return TransformKind(kind, mu)
    except BesselIndexError as exc:
        raise click.BadParameter(str(exc), param_hint="--mu")


def _xs(x: float | None, x_grid: str | None) -> list[float]:
    if (x is None) == (x_grid is None):
        raise click.UsageError("give exactly one of --x and --x-grid")
    return [x] if x is not None else parse_grid(x_grid)


def _cfg(tol: float | None, default: QuadConfig) -> QuadConfig:
    return default if tol is None else default.with_tol(tol)


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.BadParameter(f"cannot read {path}: {exc}")


def load_coeffs(path: str, kind: TransformKind) -> CoeffSeq:
    """Read ``{kind?, mu?, start_index, coeffs}`` and check it against `kind`."""
    data = _load_json(path)
    if "coeffs" not in data:
        raise click.BadParameter(f"{path}: missing 'coeffs'")
    try:
        return CoeffSeq.for_kind(kind, data["coeffs"], data.get("start_index"))
    except BesselIndexError as exc:
        raise click.BadParameter(f"{path}: {exc}")


def load_profile(spec: str) -> PeriodicProfile:
    """A preset name or a JSON file ``{cos_coeffs, sin_coeffs}``."""
    if spec in PeriodicProfile.PRESETS:
        return PeriodicProfile.preset(spec)
    data = _load_json(spec)
    try:
        return PeriodicProfile(tuple(data.get("cos_coeffs", ())), tuple(data.get("sin_coeffs", ())))
    except BesselIndexError as exc:
        raise click.BadParameter(f"{spec}: {exc}")


def _point(fn: Callable[[], tuple[float, float]], index: int, x: float | None) -> Row:
    try:
        value, err = fn()
        return Row(index, x, float(value), float(err))
    except (BesselIndexError, ValueError, ArithmeticError) as exc:
        return Row(index, x, math.nan, math.nan, f"error: {exc}")


@click.group()
@click.version_option(version=__version__, prog_name="besselindex")
def cli():
    """Index transforms with Bessel and Lommel kernels of imaginary order."""


@cli.command("eval")
@click.argument("function", type=click.Choice(EVAL_FUNCTIONS))
@click.option("--n", "n_spec", default="0", show_default=True, help="Order: int, a..b or a,b,c.")
@click.option("--x", type=float, default=None, help="Single argument.")
@click.option("--x-grid", default=None, help="Arguments as start:stop:step.")
@click.option("--mu", type=float, default=None, help="Lommel parameter.")
@click.option("--part", type=click.Choice(["re", "im"]), default="re", show_default=True,
              help="Part of the normalized J.")
@click.option("--tol", type=float, default=None, help="Accuracy target of the Bessel evaluation.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", default=None, type=click.Path(dir_okay=False), help="Output file; stdout if omitted.")
def eval_cmd(function, n_spec, x, x_grid, mu, part, tol, fmt, out):
    """Evaluate a special function or inversion kernel on a grid.

    Rows carry the order in the index column.
    """
    ns, xs = parse_index_range(n_spec), _xs(x, x_grid)
    needs_mu = function in ("lommel-s", "kernel-omega")
    if needs_mu != (mu is not None):
        raise click.UsageError(f"--mu is {'required' if needs_mu else 'not allowed'} for {function}")
    if needs_mu:
        try:
            specfun._check_mu(mu)
            if function == "kernel-omega":
                TransformKind("lommel", mu)
        except BesselIndexError as exc:
            raise click.BadParameter(str(exc), param_hint="--mu")
    if tol is not None and not tol > 0:
        raise click.BadParameter("must be positive", param_hint="--tol")
    rows = []
    for n in ns:
        for xv in xs:
            if function == "besselj-norm":
                def fn(n=n, xv=xv):
                    re, im, err = specfun.jin_normalized(n, xv, tol or specfun.BESSEL_TOL)
                    if part == "im" and im is None:
                        raise BesselIndexError("the imaginary part needs n >= 1")
                    return (re if part == "re" else im), err
            elif function == "besselk":
                def fn(n=n, xv=xv):
                    val, err = specfun.bessel_k_imag_scaled(n, xv, with_error=True)
                    return math.exp(-xv) * val, math.exp(-xv) * err
            elif function == "lommel-s":
                def fn(n=n, xv=xv):
                    val, err = specfun.lommel_scaled(mu, n, xv, with_error=True)
                    gp = specfun.gamma_product(mu, n)
                    return val / gp, err / gp
            else:
                def fn(n=n, xv=xv):
                    kind = TransformKind(_KERNEL_KIND[function], mu)
                    return transforms.kernel_values(kind, n, xv, with_error=True)
            rows.append(_point(fn, n, xv))
    _finish(rows, fmt, out)


@cli.group()
def transform():
    """Forward transforms, coefficient analysis and inversions."""


def _common(f):
    f = click.option("--kind", type=click.Choice(["re", "im", "lommel"]), required=True)(f)
    f = click.option("--mu", type=float, default=None, help="Lommel parameter in (-5/4, 0).")(f)
    f = click.option("--tol", type=float, default=None, help="Quadrature tolerance.")(f)
    f = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)(f)
    f = click.option("--out", default=None, type=click.Path(dir_okay=False))(f)
    return f


@transform.command("synth")
@_common
@click.option("--coeffs", "coeffs_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--x-grid", required=True, help="start:stop:step")
def synth_cmd(kind, mu, tol, fmt, out, coeffs_path, x_grid):
    """Forward transform of a coefficient file."""
    k = _kind(kind, mu)
    seq = load_coeffs(coeffs_path, k)
    rows = [_point(lambda xv=xv: (transforms.synthesize(k, seq, xv), 0.0), i, xv)
            for i, xv in enumerate(parse_grid(x_grid))]
    _finish(rows, fmt, out)


def _source(k: TransformKind, profile: str | None, coeffs_path: str | None):
    if (profile is None) == (coeffs_path is None):
        raise click.UsageError("give exactly one of --profile and --coeffs")
    if profile is not None:
        psi = load_profile(profile)
        try:
            psi.check_for(k)
        except BesselIndexError as exc:
            raise click.BadParameter(str(exc), param_hint="--profile")
        return psi, transforms.profile_function(k, psi)
    seq = load_coeffs(coeffs_path, k)
    return None, lambda x: transforms.synthesize(k, seq, x)


def _indices(k: TransformKind, n_spec: str | None, n_max: int | None) -> list[int]:
    if n_spec is not None:
        ns = parse_index_range(n_spec)
    elif n_max is not None:
        ns = list(range(k.min_index, n_max + 1))
    else:
        raise click.UsageError("give --n or --n-max")
    if any(n < k.min_index for n in ns):
        raise click.BadParameter(f"{k.tag} indices start at {k.min_index}", param_hint="--n")
    return ns


def _report_row(n: int, fn) -> Row:
    try:
        rep = fn()
        return Row(n, None, rep.value, rep.err_est, "ok" if rep.converged else "inconclusive")
    except (BesselIndexError, ValueError, ArithmeticError) as exc:
        return Row(n, None, math.nan, math.nan, f"error: {exc}")


@transform.command("analyze")
@_common
@click.option("--profile", default=None, help="Preset (1-cos, sin, cos, zero) or profile JSON file.")
@click.option("--coeffs", "coeffs_path", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--n", "n_spec", default=None, help="Indices: int, a..b or a,b,c.")
@click.option("--n-max", type=int, default=None, help="Indices from the first admissible one to this.")
def analyze_cmd(kind, mu, tol, fmt, out, profile, coeffs_path, n_spec, n_max):
    """Transform coefficients by improper integration of the kernel against f.

    For a profile the result is the profile moment of each index; for a
    coefficient file it is the transform of the synthesized function.
    """
    k = _kind(kind, mu)
    psi, f = _source(k, profile, coeffs_path)
    cfg = _cfg(tol, transforms.INVERSION_CONFIG)
    rows = []
    for n in _indices(k, n_spec, n_max):
        if psi is not None:
            rows.append(_report_row(n, lambda n=n: transforms.analyze_profile(k, psi, n, cfg)))
        else:
            rows.append(_report_row(n, lambda n=n: transforms.analyze(k, f, n, cfg)))
    _finish(rows, fmt, out)


@transform.command("invert-seq")
@_common
@click.option("--profile", default=None, help="Preset or profile JSON file generating f.")
@click.option("--coeffs", "coeffs_path", default=None, type=click.Path(exists=True, dir_okay=False),
              help="Coefficient file generating f by synthesis.")
@click.option("--n", "n_spec", default=None)
@click.option("--n-max", type=int, default=None)
def invert_seq_cmd(kind, mu, tol, fmt, out, profile, coeffs_path, n_spec, n_max):
    """Recover coefficients of f by the sequence inversion integrals."""
    k = _kind(kind, mu)
    _, f = _source(k, profile, coeffs_path)
    cfg = _cfg(tol, transforms.INVERSION_CONFIG)
    rows = [_report_row(n, lambda n=n: transforms.invert_to_sequence(k, f, n, cfg))
            for n in _indices(k, n_spec, n_max)]
    _finish(rows, fmt, out)


@transform.command("invert-fn")
@_common
@click.option("--coeffs", "coeffs_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--x-grid", required=True, help="start:stop:step")
@click.option("--correction", type=click.Choice(transforms.CORRECTION_MODES), default="consistent",
              show_default=True, help="Treatment of the n = 0 term for the Bessel kinds.")
def invert_fn_cmd(kind, mu, tol, fmt, out, coeffs_path, x_grid, correction):
    """Reconstruct f on a grid from profile coefficients."""
    k = _kind(kind, mu)
    seq = load_coeffs(coeffs_path, k)
    rows = [_point(lambda xv=xv: (transforms.invert_to_function(k, seq, xv, correction=correction), 0.0),
                   i, xv) for i, xv in enumerate(parse_grid(x_grid))]
    _finish(rows, fmt, out)


@cli.group("verify")
def verify_group():
    """Numerical checks of identities, bounds, equations and inversions."""


def _write_report(suite: str, results: list, out: str | None) -> None:
    recs = verify.records(results)
    header = {"program": "besselindex", "version": __version__, "suite": suite,
              "counts": {s: sum(r["status"] == s for r in recs) for s in ("pass", "fail", "inconclusive")}}
    text = json.dumps({"header": header, "records": recs}, indent=1, default=_json_default) + "\n"
    _emit(text, out)
    sys.exit(1 if header["counts"]["fail"] else 0)


def _json_default(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    raise TypeError(f"cannot serialize {type(v).__name__}")


def _identity_id(eq: str) -> str:
    tag = eq if eq.startswith(("Eq", "Laplace")) else "Eq" + eq.replace(".", "_")
    if tag not in verify.IDENTITY_IDS:
        raise click.BadParameter(f"unknown identity {eq!r}; choose from {', '.join(verify.IDENTITY_IDS)}")
    return tag


def identity_suite(ids: Iterable[str], ns: list[int] | None, us: list[float] | None, mus: list[float] | None,
                   xs: list[float] | None, tol: float | None) -> list:
    """Identity checks over the given parameters, skipping invalid ``n = 0`` cases."""
    out = []
    for tag in ids:
        for n in (ns if ns is not None else (range(6) if tag in ("Eq2_4", "Eq2_8") else range(1, 6))):
            if n == 0 and tag not in ("Eq2_4", "Eq2_8"):
                continue
            if tag in ("Eq2_8", "Eq2_25"):
                for x in xs or (0.5, 1.0, 2.0, 5.0, 10.0):
                    out.append(verify.check_kernel_identity(tag, n, x=x, tol=tol))
                continue
            default_u = (0.5, 1.0, 2.0) if tag == "Eq2_30" else (0.5, 1.0, 2.0, 3.0, math.pi)
            for u in us or default_u:
                if tag == "Eq2_30":
                    for mu in mus or (-0.5, -1.0):
                        out.append(verify.check_kernel_identity(tag, n, u, mu, tol=tol))
                else:
                    out.append(verify.check_kernel_identity(tag, n, u, tol=tol))
    return out


def roundtrip_suite(kinds: Iterable[TransformKind] | None = None) -> list:
    """Default sequence and function roundtrips for every kind."""
    lom = TransformKind.lommel(-0.5)
    jobs = [(TransformKind.rej(), CoeffSeq.for_kind(TransformKind.rej(), [1 / (n + 1) ** 3 for n in range(9)])),
            (TransformKind.imj(), CoeffSeq.for_kind(TransformKind.imj(), [1 / n ** 3 for n in range(1, 9)])),
            (lom, CoeffSeq.for_kind(lom, [1.0])),
            (lom, CoeffSeq.for_kind(lom, [1.0, 1 / 8, 1 / 27])),
            (TransformKind.rej(), PeriodicProfile.preset("1-cos")),
            (TransformKind.imj(), PeriodicProfile.preset("1-cos")),
            (lom, PeriodicProfile.preset("sin"))]
    wanted = None if kinds is None else {(k.tag, k.mu) for k in kinds}
    return [verify.run_roundtrip(k, spec) for k, spec in jobs if wanted is None or (k.tag, k.mu) in wanted]


def bound_suite() -> list:
    return [verify.check_bounds(t) for t in verify.BOUND_TARGETS]


def ode_suite(targets=verify.ODE_TARGETS, ns=None, mu: float = -0.5) -> list:
    out = []
    for t in targets:
        for n in ns if ns is not None else range(4):
            if t == "Lommel_1_20" and n == 0:
                continue
            out.append(verify.check_ode_residual(t, n, mu if t == "Lommel_1_20" else None))
            if t == "BesselJ_1_7" and n > 0:
                out.append(verify.check_ode_residual(t, n, part="im"))
    return out


_out_option = click.option("--out", default=None, type=click.Path(dir_okay=False),
                           help="Report file; stdout if omitted.")


@verify_group.command("identities")
@click.option("--eq", "eqs", multiple=True, help="Identity id, e.g. Eq2_4 or 2.4; all when omitted.")
@click.option("--n", "n_spec", default=None)
@click.option("--u", "u_spec", default=None, help="Comma-separated u values in (0, pi].")
@click.option("--mu", "mu_spec", default=None, help="Comma-separated Lommel parameters.")
@click.option("--x", "x_spec", default=None, help="Comma-separated x values for the representations.")
@click.option("--tol", type=float, default=None)
@_out_option
def verify_identities(eqs, n_spec, u_spec, mu_spec, x_spec, tol, out):
    """Both sides of the kernel identities in normalized form."""
    ids = [_identity_id(e) for e in eqs] or list(verify.IDENTITY_IDS)
    try:
        results = identity_suite(ids, parse_index_range(n_spec) if n_spec else None,
                                 _parse_floats(u_spec) if u_spec else None,
                                 _parse_floats(mu_spec) if mu_spec else None,
                                 _parse_floats(x_spec) if x_spec else None, tol)
    except BesselIndexError as exc:
        raise click.BadParameter(str(exc))
    _write_report("identities", results, out)


@verify_group.command("bounds")
@click.option("--target", "targets", multiple=True, type=click.Choice(verify.BOUND_TARGETS))
@_out_option
def verify_bounds(targets, out):
    """Empirical constants of the growth bounds."""
    _write_report("bounds", [verify.check_bounds(t) for t in (targets or verify.BOUND_TARGETS)], out)


@verify_group.command("ode")
@click.option("--target", type=click.Choice(["besselj", "lommel", "all"]), default="all", show_default=True)
@click.option("--n", "n_spec", default=None)
@click.option("--mu", type=float, default=-0.5, show_default=True)
@_out_option
def verify_ode(target, n_spec, mu, out):
    """Finite-difference residuals of the Bessel and Lommel equations."""
    targets = {"besselj": ("BesselJ_1_7",), "lommel": ("Lommel_1_20",), "all": verify.ODE_TARGETS}[target]
    try:
        results = ode_suite(targets, parse_index_range(n_spec) if n_spec else None, mu)
    except BesselIndexError as exc:
        raise click.BadParameter(str(exc))
    _write_report("ode", results, out)


@verify_group.command("roundtrip")
@click.option("--kind", type=click.Choice(["re", "im", "lommel"]), default=None)
@click.option("--mu", type=float, default=None)
@click.option("--seq-file", default=None, type=click.Path(exists=True, dir_okay=False))
@click.option("--profile", default=None, help="Preset or profile JSON file.")
@click.option("--x-grid", default=None, help="Reconstruction grid for a profile.")
@click.option("--tol", type=float, default=1e-4, show_default=True)
@_out_option
def verify_roundtrip(kind, mu, seq_file, profile, x_grid, tol, out):
    """Forward transform followed by inversion.

    Without --seq-file or --profile the default roundtrips of the selected
    kind (all kinds when --kind is omitted) are run.
    """
    if seq_file or profile:
        if kind is None:
            raise click.UsageError("--kind is required with --seq-file or --profile")
        k = _kind(kind, mu)
        spec = load_coeffs(seq_file, k) if seq_file else load_profile(profile)
        grid = parse_grid(x_grid) if x_grid else None
        try:
            results = [verify.run_roundtrip(k, spec, grid, tol=tol)]
        except BesselIndexError as exc:
            raise click.BadParameter(str(exc))
    else:
        if kind == "lommel" and mu is None:
            mu = -0.5
        kinds = None if kind is None else [_kind(kind, mu)]
        results = roundtrip_suite(kinds)
    _write_report("roundtrip", results, out)


@verify_group.command("all")
@_out_option
def verify_all(out):
    """Every default suite."""
    results = (identity_suite(verify.IDENTITY_IDS, None, None, None, None, None) + bound_suite()
               + ode_suite() + roundtrip_suite())
    _write_report("all", results, out)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
