"""prandtl-modes command line.

Exit codes: 0 success, 1 failed verification, 2 unknown function or invalid
input, 3 evaluation error, 4 degenerate boundary system.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click

from . import oracle
from .errors import DegenerateSystem, InvalidMode, InvalidShear, PrandtlModesError
from .frames import ModeSpec, ShearFlow, build_frame
from .modes import (
    UPSILON_ABS_TOL,
    UPSILON_REL_TOL,
    CoefficientTriple,
    UpsilonBasis,
    format_float as fmt,
    sample_profile,
    solve_boundary_coefficients,
)
from .shearlayer import CriticalPoint, example_flow_critical_point, sample_V, shear_layer_V
from .solutions import (
    g_mu1,
    psi_mu,
    tau_criterion,
    w_criterion,
    x_tau,
    y_mu,
)
from .specfun import erf_c, erfi_c, gamma_c, kummer_m, kummer_m_prime

EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_EVAL = 3
EXIT_DEGENERATE = 4


def parse_complex(text) -> complex:
    if isinstance(text, (int, float, complex)):
        return complex(text)
    return complex(str(text).replace(" ", "").replace("i", "j").replace("jnf", "inf"))


class ComplexParam(click.ParamType):
    name = "complex"

    def convert(self, value, param, ctx):
        try:
            return parse_complex(value)
        except ValueError:
            self.fail(f"{value!r} is not a complex number", param, ctx)


COMPLEX = ComplexParam()


@dataclass
class RunConfig:
    command: str
    shear: ShearFlow | None = None
    mode: ModeSpec | None = None
    coeffs: CoefficientTriple | None = None
    grid: tuple = (0.0, 1.0, 2)
    tolerances: dict = field(default_factory=lambda: {"rel": UPSILON_REL_TOL,
                                                      "abs": UPSILON_ABS_TOL})
    output_path: str | None = None
    format: str = "csv"

    def __post_init__(self):
        lo, hi, n = self.grid
        if int(n) < 2:
            raise ValueError("grid needs at least two points")
        if not hi > lo:
            raise ValueError("grid bounds must satisfy MIN < MAX")
        if any(v <= 0 for v in self.tolerances.values()):
            raise ValueError("tolerances must be positive")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be csv or json")


def _fail(code, message):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _write_profile(profile, out, fmt_name):
    if out is None:
        for c, v in profile.rows:
            click.echo(f"{fmt(c)},{fmt(v.real)},{fmt(v.imag)}")
        return
    if fmt_name == "json":
        payload = {"meta": profile.meta,
                   "rows": [[c, v.real, v.imag] for c, v in profile.rows]}
        Path(out).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        click.echo(f"wrote {out}", err=True)
    else:
        csv_path, meta_path = profile.write(out)
        click.echo(f"wrote {csv_path} and {meta_path}", err=True)


# ---------------------------------------------------------------- registry

def _needs(params, *names):
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise click.UsageError("missing option(s): " + ", ".join("--" + m for m in missing))
    return [params[n] for n in names]


def _upsilon(branch):
    def f(z, p):
        mu, eta_star = _needs(p, "mu", "eta_star")
        return UpsilonBasis(mu, eta_star).upsilon(branch, z)
    return f


def _V(z, p):
    if p.get("upp") is None:
        cp = example_flow_critical_point()
    else:
        cp = CriticalPoint(0.0, float(p["upp"].real))
    return shear_layer_V(cp, z.real)


REGISTRY = {
    "kummer_m": lambda z, p: kummer_m(*_needs(p, "a", "c"), z),
    "kummer_m_prime": lambda z, p: kummer_m_prime(*_needs(p, "a", "c"), z),
    "erf": lambda z, p: erf_c(z),
    "erfi": lambda z, p: erfi_c(z),
    "gamma": lambda z, p: gamma_c(z),
    "x_tau1": lambda z, p: x_tau(_needs(p, "tau")[0], 1, z),
    "x_tau2": lambda z, p: x_tau(_needs(p, "tau")[0], 2, z),
    "y_mu1": lambda z, p: y_mu(_needs(p, "mu")[0], 1, z),
    "y_mu2": lambda z, p: y_mu(_needs(p, "mu")[0], 2, z),
    "psi1": lambda z, p: psi_mu(_needs(p, "mu")[0], 1, z),
    "psi2": lambda z, p: psi_mu(_needs(p, "mu")[0], 2, z),
    "g": lambda z, p: g_mu1(z),
    "w_criterion": lambda z, p: w_criterion(z),
    "tau_criterion": lambda z, p: tau_criterion(),
    "upsilon1": _upsilon(1),
    "upsilon2": _upsilon(2),
    "V": _V,
}


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Explicit quasi-eigenmodes of the linearised Prandtl equations."""


@main.command("eval", context_settings={"ignore_unknown_options": True})
@click.argument("name")
@click.argument("point", required=False, default="0")
@click.option("--a", "a", type=COMPLEX, help="Kummer parameter a.")
@click.option("--c", "c", type=COMPLEX, help="Kummer parameter c.")
@click.option("--tau", type=COMPLEX, help="Spectral parameter tau.")
@click.option("--mu", type=COMPLEX, help="Rotated spectral parameter mu.")
@click.option("--eta-star", type=COMPLEX, default=0j, show_default=True)
@click.option("--upp", type=COMPLEX, help="U''(a) for V (default: example flow).")
def cmd_eval(name, point, **params):
    """Evaluate NAME at POINT and print 're im'."""
    if name not in REGISTRY:
        click.echo(f"error: unknown function {name!r}; choose from "
                   + ", ".join(sorted(REGISTRY)), err=True)
        sys.exit(EXIT_USAGE)
    try:
        z = parse_complex(point)
    except ValueError:
        _fail(EXIT_USAGE, f"{point!r} is not a complex number")
    try:
        val = complex(REGISTRY[name](z, params))
    except click.UsageError:
        raise
    except (PrandtlModesError, ValueError, ZeroDivisionError, OverflowError) as exc:
        _fail(EXIT_EVAL, f"{type(exc).__name__}: {exc}")
    click.echo(f"{fmt(val.real)} {fmt(val.imag)}")


def _grid_option(default):
    return click.option("--grid", nargs=3, type=(float, float, int), default=default,
                        show_default=True, metavar="MIN MAX N")


@main.command("mode")
@click.option("--alpha", type=float, default=0.0, show_default=True)
@click.option("--beta", type=float, default=-1.0, show_default=True)
@click.option("--a", "a", type=float, default=0.0, show_default=True)
@click.option("--k", type=int, default=1, show_default=True)
@click.option("--sigma-re", type=float, default=1 / math.sqrt(2), show_default=True)
@click.option("--sigma-im", type=float, default=-1 / math.sqrt(2), show_default=True)
@click.option("--c0-re", type=float, default=0.0)
@click.option("--c0-im", type=float, default=0.0)
@click.option("--c1-re", type=float, default=0.0)
@click.option("--c1-im", type=float, default=0.0)
@click.option("--c2-re", type=float, default=0.0)
@click.option("--c2-im", type=float, default=0.0)
@_grid_option((0.0, 5.0, 201))
@click.option("--out", "out", type=click.Path(dir_okay=False), help="CSV/JSON output path.")
@click.option("--format", "fmt_name", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--no-slip", is_flag=True, help="Use the first boundary-solved triple.")
@click.option("--tol-rel", type=float, default=UPSILON_REL_TOL, show_default=True)
@click.option("--tol-abs", type=float, default=UPSILON_ABS_TOL, show_default=True)
@click.option("--threads", type=int, default=None, help="Worker threads (default: env).")
def cmd_mode(alpha, beta, a, k, sigma_re, sigma_im, c0_re, c0_im, c1_re, c1_im, c2_re, c2_im,
             grid, out, fmt_name, no_slip, tol_rel, tol_abs, threads):
    """Sample the stream function phi_k on a y grid."""
    try:
        cfg = RunConfig(
            "mode", ShearFlow(alpha, beta, a), ModeSpec(k, complex(sigma_re, sigma_im)),
            CoefficientTriple(complex(c0_re, c0_im), complex(c1_re, c1_im),
                              complex(c2_re, c2_im)),
            grid, {"rel": tol_rel, "abs": tol_abs}, out, fmt_name,
        )
    except (InvalidShear, InvalidMode, ValueError) as exc:
        _fail(EXIT_USAGE, str(exc))
    frame = build_frame(cfg.shear, cfg.mode)
    coeffs = cfg.coeffs
    if no_slip:
        try:
            coeffs = solve_boundary_coefficients(frame.mu, frame.eta_star)[0]
        except DegenerateSystem as exc:
            _fail(EXIT_DEGENERATE, str(exc))
    try:
        basis = UpsilonBasis(frame.mu, frame.eta_star, cfg.tolerances["rel"],
                             cfg.tolerances["abs"])
        profile = sample_profile(frame, coeffs, *cfg.grid, threads=threads, basis=basis)
    except (PrandtlModesError, ValueError) as exc:
        _fail(EXIT_EVAL, f"{type(exc).__name__}: {exc}")
    _write_profile(profile, cfg.output_path, cfg.format)


@main.command("verify")
@click.argument("suite", type=click.Choice(["recurrences", "odes", "criterion",
                                            "asymptotics", "boundary", "all"]))
@click.option("--seed", type=int, default=oracle.SEED, show_default=True)
@click.option("--perturb-tau", type=float, default=0.0,
              help="Shift tau before the criterion residual (self-test).")
@click.option("--out", "out", type=click.Path(dir_okay=False))
def cmd_verify(suite, seed, perturb_tau, out):
    """Run a verification suite; exit 1 if any check misses its threshold."""
    report = oracle.run_suite(suite, seed=seed, tau_shift=perturb_tau)
    text = report.to_json()
    if out:
        Path(out).write_text(text + "\n")
    else:
        click.echo(text)
    failed = [r for r in report.reports if not r.passed]
    for r in failed:
        click.echo(f"FAIL {r.equation}: {r.max_rel_residual:.3e} >= {r.threshold:.1e}", err=True)
    click.echo(f"{suite}: {len(report.reports) - len(failed)}/{len(report.reports)} passed",
               err=True)
    if failed:
        sys.exit(EXIT_VERIFY)


@main.command("shearlayer")
@click.option("--upp", type=float, help="U''(a), must be negative.")
@click.option("--a", "a", type=float, default=0.0, show_default=True)
@click.option("--example", is_flag=True, help="Use U(y) = 2 y exp(-y^2).")
@_grid_option((-6.0, 6.0, 601))
@click.option("--out", "out", type=click.Path(dir_okay=False))
@click.option("--format", "fmt_name", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--threads", type=int, default=None)
def cmd_shearlayer(upp, a, example, grid, out, fmt_name, threads):
    """Sample the shear-layer profile V(z)."""
    if example:
        cp = example_flow_critical_point()
    elif upp is None:
        _fail(EXIT_USAGE, "give --upp or --example")
    else:
        try:
            cp = CriticalPoint(a, upp)
        except InvalidShear as exc:
            _fail(EXIT_USAGE, str(exc))
    try:
        RunConfig("shearlayer", grid=grid, format=fmt_name)
        profile = sample_V(cp, *grid, threads=threads)
    except ValueError as exc:
        _fail(EXIT_USAGE, str(exc))
    _write_profile(profile, out, fmt_name)


FIGURE1_K = (1, 100, 10**6)
FIGURE2_K = (1, 10, 100)


@main.command("figures")
@click.option("--out-dir", type=click.Path(file_okay=False), default="figures",
              show_default=True)
@click.option("--n", "n", type=int, default=401, show_default=True)
def cmd_figures(out_dir, n):
    """Write the datasets of the worked examples and the shear-layer plot."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sigma = complex(1, -1) / math.sqrt(2)
    free = CoefficientTriple(math.sqrt(math.pi / 2), 2.0, 0.0)
    for k in FIGURE1_K:
        frame = build_frame(ShearFlow(0.0, -1.0, 0.0), ModeSpec(k, sigma))
        sample_profile(frame, free, 0.0, 5.0, n).write(out / f"figure1_k{k}.csv")
    for k in FIGURE2_K:
        frame = build_frame(ShearFlow(0.0, -1.0, 0.0), ModeSpec(k, sigma))
        triple = solve_boundary_coefficients(frame.mu, frame.eta_star)[0]
        sample_profile(frame, triple, 0.0, 2.0, n).write(out / f"figure2_k{k}.csv")
    sample_V(example_flow_critical_point(), -6.0, 6.0, 601).write(out / "figure3.csv")
    click.echo(f"wrote datasets to {out}", err=True)


if __name__ == "__main__":  # pragma: no cover
    main()
