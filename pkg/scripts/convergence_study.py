"""
Convergence study: how the compressions approach the closed-form boundary.

Runs the comparison pipeline for N in {128, 256, 512, 1024} and writes one
CSV row per (order, N) with the support gap, the Hausdorff distance and
the symmetry defect.
"""
import logging
from typing import List, Optional

import pandas as pd
import typer

from app.core.logging import configure_logging
from app.services.disk_maps import elliptic_symbol
from app.services.pipeline.comparison_pipeline import ComparisonPipeline
from app.utils.io import FLOAT_FORMAT, emit
from config import settings

logger = logging.getLogger(__name__)

DEFAULT_SIZES = [128, 256, 512, 1024]


def study(a: complex, orders: List[int], sizes: List[int], angles: int) -> pd.DataFrame:
    """One row per (p, N); the ladder inside each run is not reported."""
    pipeline = ComparisonPipeline()
    rows = []
    for p in orders:
        sym = elliptic_symbol(a, p)
        for N in sizes:
            logger.info(f"Comparing p={p} at N={N}")
            report = pipeline.run(sym, N, angles)["report"]
            rows.append(
                {
                    "p": p,
                    "N": N,
                    "sup_support_gap": report.sup_support_gap,
                    "hausdorff": report.hausdorff,
                    "symmetry_defect": report.symmetry_defect,
                    "upper_bound_ok": report.upper_bound_ok,
                    "monotonicity_ok": report.monotonicity_ok,
                }
            )
    return pd.DataFrame(rows)


def main(
    a_re: float = typer.Option(0.5, "--a-re", help="Real part of the fixed point"),
    a_im: float = typer.Option(0.0, "--a-im", help="Imaginary part of the fixed point"),
    order: List[int] = typer.Option([2, 3], "--order", help="Orders to study; repeat the flag"),
    size: Optional[List[int]] = typer.Option(None, "--N", help="Truncation orders; repeat the flag"),
    angles: int = typer.Option(settings.default_angles, "--angles"),
    output: Optional[str] = typer.Option(None, "--output", "-o"),
) -> None:
    """Write the convergence table as CSV."""
    configure_logging()
    logger.info("Starting convergence study...")
    frame = study(complex(a_re, a_im), list(order), list(size or DEFAULT_SIZES), angles)
    emit(frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n"), output)
    logger.info("Convergence study completed!")


if __name__ == "__main__":
    typer.run(main)
