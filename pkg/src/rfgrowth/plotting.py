"""Optional figure rendering for profiles and witness sequences.

matplotlib loads lazily with the file-only backend so that merely importing
the package never touches a display; the delimited output a run produces is
the same whether or not a figure was requested.
"""

from __future__ import annotations

import math
from typing import Sequence

from .growth import ExponentFit, GrowthProfile, WitnessStep


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def save_profile_plot(profile: GrowthProfile, path: str) -> None:
    """Step plot of the running max divisibility value against radius."""
    plt = _pyplot()
    radii = [row.radius for row in profile.rows]
    values = [row.value for row in profile.rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.step(radii, values, where="post", marker="o")
    ax.set_xlabel("radius")
    ax.set_ylabel("max divisibility value")
    ax.set_yscale("log")
    ax.set_title(f"{profile.ring_name}: family {profile.family}, {profile.length} length")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_witness_plot(
    steps: Sequence[WitnessStep], fit: ExponentFit | None, path: str, ring_name: str = ""
) -> None:
    """Log-log scatter of value against usable prime, with the fitted line."""
    plt = _pyplot()
    xs = [s.usable_prime for s in steps]
    ys = [s.value for s in steps]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.scatter(xs, ys, zorder=3)
    if fit is not None and not fit.degenerate and fit.slope is not None:
        grid = sorted(set(xs))
        line = [math.exp(fit.intercept + fit.slope * math.log(q)) for q in grid]
        ax.plot(grid, line, linestyle="--", label=f"slope {fit.slope:.2f}")
        ax.legend()
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("first usable prime")
    ax.set_ylabel("divisibility value")
    if ring_name:
        ax.set_title(ring_name)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
