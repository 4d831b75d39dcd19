"""
Command-line front end.

Exit codes: 0 on success, 1 when a check fails, 2 for invalid input.
"""
import sys
from contextlib import contextmanager
from enum import Enum
from typing import Iterator, List, Optional, Tuple

import numpy as np
import typer
from pydantic import ValidationError

from app.core.exceptions import DomainError, NumericalRangeError
from app.core.logging import configure_logging
from app.models.disk import EllipticSymbol
from app.schemas.exports import CurveExport, MatrixExport, SymbolExport, SymbolRef
from app.schemas.run_config import RunConfig
from app.services.disk_maps import (
    elliptic_symbol,
    fixed_point_residual,
    multiplier_residual,
    order_residual,
)
from app.services.hardy_operator import composition_matrix
from app.services.numrange_numeric import angle_grid, support_function, symmetry_defect
from app.services.order2_model import ellipse_params, ellipse_samples
from app.services.order3_model import (
    TWO_PI_3,
    dual_cubic_singularity_check,
    envelope_samples,
    factorization_check,
    foci_check,
    geometry_from_L,
    geometry_of,
    inflexional_tangent_check,
    normalized_sextic,
    on_curve_point,
    sextic_coeffs,
    singularity_report,
    x_axis_roots,
)
from app.services.pipeline.comparison_pipeline import ComparisonPipeline
from app.suites import run_suite
from app.utils.io import emit, read_boundary_csv, samples_to_csv, to_json
from config import settings

EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

app = typer.Typer(
    name="nrc",
    help="Numerical ranges of composition operators with elliptic symbols.",
    add_completion=False,
    no_args_is_help=True,
)


class Basis(str, Enum):
    monomial = "monomial"
    guyker = "guyker"


class Suite(str, Enum):
    observations = "observations"
    identities = "identities"
    order2 = "order2"
    order3 = "order3"
    all = "all"


class Emit(str, Enum):
    samples = "samples"
    sextic = "sextic"


A_OPTION = typer.Option((0.5, 0.0), "--a", help="Fixed point as two reals: RE IM")
ORDER_OPTION = typer.Option(2, "--order", "-p", help="Order p of the symbol")
K_OPTION = typer.Option(1, "--k", help="Multiplier index, phi'(a) = exp(2 pi i k/p)")
N_OPTION = typer.Option(None, "--N", "-N", help="Truncation order, chosen from |a| when omitted")
ANGLES_OPTION = typer.Option(None, "--angles", help="Number of uniform angles")
OUTPUT_OPTION = typer.Option(None, "--output", "-o", help="Output file, standard output when omitted")


@contextmanager
def _usage_errors() -> Iterator[None]:
    """Report invalid input on standard error and exit with status 2."""
    try:
        yield
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        typer.echo(f"error: {messages}", err=True)
        raise typer.Exit(EXIT_USAGE)
    except NumericalRangeError as e:
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(EXIT_USAGE)


def _config(a: Tuple[float, float], **kwargs) -> RunConfig:
    fields = {key: value for key, value in kwargs.items() if value is not None}
    return RunConfig(a_re=a[0], a_im=a[1], **fields)


def _symbol(cfg: RunConfig) -> EllipticSymbol:
    return elliptic_symbol(cfg.a, cfg.p, cfg.k)


def _pairs(matrix: np.ndarray) -> List[List[Tuple[float, float]]]:
    return [[(float(z.real), float(z.imag)) for z in row] for row in matrix]


def _foci(p: Optional[int]) -> List[complex]:
    if p == 2:
        return [-1.0, 1.0]
    if p == 3:
        return [complex(np.cos(k * TWO_PI_3), np.sin(k * TWO_PI_3)) for k in range(3)]
    return []


@app.callback()
def main_callback(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Log level, defaults to NRC_LOG_LEVEL"),
    log_format: Optional[str] = typer.Option(None, "--log-format", help="console or json"),
) -> None:
    """Logs go to standard error; outputs go to the file or standard output."""
    configure_logging(level=log_level, fmt=log_format)


@app.command()
def symbol(a: Tuple[float, float] = A_OPTION, order: int = ORDER_OPTION, k: int = K_OPTION) -> None:
    """Print the Möbius matrix, the multiplier and the verification residuals."""
    with _usage_errors():
        cfg = _config(a, p=order, k=k)
        sym = _symbol(cfg)
        export = SymbolExport(
            symbol=SymbolRef.from_symbol(sym),
            matrix=_pairs(sym.map.m),
            display=_pairs(sym.map.normalized_display()),
            multiplier=(sym.multiplier.real, sym.multiplier.imag),
            order_residual=order_residual(sym),
            multiplier_residual=multiplier_residual(sym),
            fixed_point_residual=fixed_point_residual(sym),
        )
        emit(to_json(export))


@app.command()
def matrix(
    a: Tuple[float, float] = A_OPTION,
    order: int = ORDER_OPTION,
    k: int = K_OPTION,
    N: Optional[int] = N_OPTION,
    basis: Basis = typer.Option(Basis.monomial, "--basis", help="Coordinate system"),
    output: Optional[str] = OUTPUT_OPTION,
) -> None:
    """Write the compressed composition matrix as JSON."""
    with _usage_errors():
        cfg = _config(a, p=order, k=k, N=N, output=output, format="json")
        T = composition_matrix(_symbol(cfg), cfg.N, basis=basis.value)
        emit(to_json(MatrixExport.from_operator(T)), cfg.output)


@app.command("range")
def range_(
    a: Tuple[float, float] = A_OPTION,
    order: int = ORDER_OPTION,
    k: int = K_OPTION,
    N: Optional[int] = N_OPTION,
    angles: Optional[int] = ANGLES_OPTION,
    basis: Basis = typer.Option(Basis.monomial, "--basis", help="Coordinate system"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads, defaults to NRC_THREADS"),
    symmetry: bool = typer.Option(False, "--symmetry", help="Report the rotation defect on standard error"),
    output: Optional[str] = OUTPUT_OPTION,
) -> None:
    """Numeric support sweep as CSV alpha,lambda,x,y."""
    with _usage_errors():
        cfg = _config(a, p=order, k=k, N=N, angles=angles or settings.default_angles, output=output, symmetry=symmetry)
        T = composition_matrix(_symbol(cfg), cfg.N, basis=basis.value)
        samples = support_function(T, angle_grid(cfg.angles), threads=threads)
        if cfg.symmetry:
            typer.echo(f"symmetry_defect={symmetry_defect(samples, cfg.p):.3e}", err=True)
        emit(samples_to_csv(samples), cfg.output)


@app.command()
def closedform(
    a: Tuple[float, float] = A_OPTION,
    order: int = ORDER_OPTION,
    angles: Optional[int] = ANGLES_OPTION,
    emit_kind: Emit = typer.Option(Emit.samples, "--emit", help="samples (CSV) or sextic (order 3, JSON)"),
    output: Optional[str] = OUTPUT_OPTION,
) -> None:
    """Closed-form boundary: the ellipse for order 2, the envelope for order 3."""
    with _usage_errors():
        cfg = _config(a, p=order, angles=angles or settings.default_angles, output=output)
        if cfg.p not in (2, 3):
            raise DomainError(f"No closed form for order {cfg.p}")
        if emit_kind is Emit.sextic:
            if cfg.p != 3:
                raise DomainError("--emit sextic needs --order 3")
            geo = geometry_of(cfg.a)
            export = CurveExport(L=geo.L, delta=geo.delta, modulus=abs(cfg.a), coefficients=sextic_coeffs(geo.L).as_dict())
            emit(to_json(export), cfg.output)
            return
        grid = angle_grid(cfg.angles)
        if cfg.p == 2:
            samples = ellipse_samples(ellipse_params(cfg.a), grid)
        else:
            samples = envelope_samples(geometry_of(cfg.a), grid)
        emit(samples_to_csv(samples), cfg.output)


@app.command()
def compare(
    a: Tuple[float, float] = A_OPTION,
    order: int = ORDER_OPTION,
    k: int = K_OPTION,
    N: Optional[int] = N_OPTION,
    angles: Optional[int] = ANGLES_OPTION,
    basis: Basis = typer.Option(Basis.monomial, "--basis", help="Coordinate system"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads, defaults to NRC_THREADS"),
    output: Optional[str] = OUTPUT_OPTION,
) -> None:
    """Numeric sweep against the closed form; JSON report."""
    with _usage_errors():
        cfg = _config(a, p=order, k=k, N=N, angles=angles or settings.default_angles, output=output)
        result = ComparisonPipeline(threads=threads, basis=basis.value).run(_symbol(cfg), cfg.N, cfg.angles)
        emit(to_json(result["report"]), cfg.output)


@app.command()
def curve(
    L: float = typer.Option(..., "--L", help="Curve constant, L > 3/4"),
    emit_kind: Emit = typer.Option(Emit.sextic, "--emit", help="sextic (JSON with checks) or samples (CSV)"),
    angles: Optional[int] = ANGLES_OPTION,
    output: Optional[str] = OUTPUT_OPTION,
) -> None:
    """Boundary sextic for a given L, with its structural checks."""
    with _usage_errors():
        geo = geometry_from_L(L)
        if emit_kind is Emit.samples:
            emit(samples_to_csv(envelope_samples(geo, angle_grid(angles or settings.default_angles))), output)
            return

        sextic = sextic_coeffs(L)
        x, y = on_curve_point(L)
        strict = settings.strict_equality_tolerance
        checks = {
            "factorization": factorization_check(sextic),
            "on_curve_point": float(normalized_sextic(x, y, sextic)),
            "singularities": singularity_report(sextic),
            "foci": foci_check(L),
            "x_axis_roots": x_axis_roots(sextic),
            "dual_cubic": dual_cubic_singularity_check(L),
            "inflexional_tangent": inflexional_tangent_check(L),
        }
        passed = (
            checks["factorization"] <= strict
            and checks["on_curve_point"] <= strict
            and checks["singularities"]["passed"]
            and checks["foci"]["passed"]
            and len(checks["x_axis_roots"]) == 4
        )
        checks["passed"] = bool(passed)
        export = CurveExport(L=L, delta=geo.delta, modulus=abs(geo.a), coefficients=sextic.as_dict(), checks=checks)
        emit(to_json(export), output)
    if not passed:
        raise typer.Exit(EXIT_CHECK_FAILED)


@app.command()
def check(
    suite: Suite = typer.Option(Suite.all, "--suite", help="Suite to run"),
    a: Tuple[float, float] = A_OPTION,
    k: int = K_OPTION,
    trials: Optional[int] = typer.Option(None, "--trials", help="Random trials, defaults to NRC_DEFAULT_TRIALS"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Root seed, defaults to NRC_DEFAULT_SEED"),
    output: Optional[str] = OUTPUT_OPTION,
) -> None:
    """Run a check suite and write its report as JSON."""
    with _usage_errors():
        cfg = _config(
            a,
            p=3 if suite is not Suite.order2 else 2,
            k=k,
            trials=trials or settings.default_trials,
            seed=settings.default_seed if seed is None else seed,
            output=output,
        )
        report = run_suite(suite.value, cfg.a, trials=cfg.trials, seed=cfg.seed, k=cfg.k)
        emit(to_json(report), cfg.output)
    if not report.passed:
        for record in report.failed_records:
            typer.echo(f"failed: {record.name} (worst {record.worst_value}, bound {record.bound})", err=True)
        raise typer.Exit(EXIT_CHECK_FAILED)


@app.command()
def plot(
    numeric: str = typer.Argument(..., help="CSV from `range`"),
    overlay: Optional[str] = typer.Option(None, "--overlay", help="CSV from `closedform`"),
    order: Optional[int] = typer.Option(None, "--order", "-p", help="Draw the foci of this order"),
    title: Optional[str] = typer.Option(None, "--title"),
    output: Optional[str] = OUTPUT_OPTION,
) -> None:
    """Render boundary CSV files to SVG."""
    from app.utils.plotting import boundary_svg

    with _usage_errors():
        samples = read_boundary_csv(numeric)
        closed = read_boundary_csv(overlay) if overlay else None
        emit(boundary_svg(samples, closed, foci=_foci(order), title=title), output)


def run(argv: Optional[List[str]] = None) -> None:
    """Console entry point."""
    app(args=argv if argv is not None else sys.argv[1:], prog_name="nrc")
