"""
Static SVG figures of numerical-range boundaries.
"""
import io
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from app.models.numrange import SupportSample  # noqa: E402

# Fixed ids and no timestamp keep the SVG byte-stable.
plt.rcParams["svg.hashsalt"] = "numrange-composition"
plt.rcParams["svg.fonttype"] = "none"

FIGURE_SIZE = (5.0, 5.0)


def _closed(samples: Sequence[SupportSample]) -> tuple:
    x = np.array([s.x for s in samples] + [samples[0].x])
    y = np.array([s.y for s in samples] + [samples[0].y])
    return x, y


def boundary_svg(
    numeric: Sequence[SupportSample],
    overlay: Optional[Sequence[SupportSample]] = None,
    foci: Sequence[complex] = (),
    title: Optional[str] = None,
) -> bytes:
    """
    Numeric boundary as a solid polyline, the closed form dashed on top,
    foci as markers.
    """
    fig, ax = plt.subplots(figsize=FIGURE_SIZE)
    try:
        x, y = _closed(numeric)
        ax.plot(x, y, color="black", linewidth=1.0, label="numeric")
        if overlay:
            ox, oy = _closed(overlay)
            ax.plot(ox, oy, color="tab:red", linewidth=0.8, linestyle="--", label="closed form")
        if len(foci):
            f = np.asarray(foci, dtype=complex)
            ax.plot(f.real, f.imag, linestyle="none", marker="+", color="tab:blue", label="foci")
        ax.set_aspect("equal")
        ax.set_xlabel("Re")
        ax.set_ylabel("Im")
        ax.spines["right"].set_visible(False)
        ax.spines["top"].set_visible(False)
        if title:
            ax.set_title(title)
        ax.legend(loc="upper right", frameon=False)

        buffer = io.BytesIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
        return buffer.getvalue()
    finally:
        plt.close(fig)
