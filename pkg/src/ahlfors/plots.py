"""Figure rendering for CLI outputs (Agg backend, deterministic files)."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _closed(values: np.ndarray) -> np.ndarray:
    return np.append(values, values[0])


def _plot_curves(ax, outer, inner, color, label_prefix=""):
    ax.plot(_closed(outer).real, _closed(outer).imag, color=color, lw=1.2,
            label=f"{label_prefix}outer")
    ax.plot(_closed(inner).real, _closed(inner).imag, color=color, lw=1.2,
            ls="--", label=f"{label_prefix}inner")


def render_map_figure(domain, phi, path, median=None):
    """Side-by-side domain and image of the representative map."""
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10.2, 5.0))
    n_o = domain.outer.n
    _plot_curves(ax0, domain.outer.samples, domain.inner.samples, "C0")
    pr = phi.params
    ax0.plot([pr.base_point.real], [pr.base_point.imag], "k*", ms=9, label="base point")
    ax0.plot([pr.p1.real, pr.p2.real], [pr.p1.imag, pr.p2.imag], "r.", ms=8,
             label="branch points")
    if median is not None and median.points.size:
        pts = _closed(median.points)
        ax0.plot(pts.real, pts.imag, color="C2", lw=1.0, label="median")
    ax0.set_title("domain")

    vals = phi.boundary_values
    _plot_curves(ax1, vals[:n_o], vals[n_o:], "C1", label_prefix="image ")
    theta = np.linspace(0, 2 * np.pi, 257)
    ax1.plot(np.cos(theta), np.sin(theta), color="0.6", lw=0.8, ls=":",
             label="unit circle")
    ax1.plot([-1, 1], [0, 0], "r.", ms=8)
    ax1.set_title(f"image in |z + 1/z| < 2r,  r = {pr.r:.6g}")

    for ax in (ax0, ax1):
        ax.set_aspect("equal")
        ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_boundary_values_figure(domain, values, path, title, marks=()):
    """Domain boundary colored by the phase of the given boundary values."""
    fig, ax = plt.subplots(figsize=(5.6, 5.2))
    n_o = domain.outer.n
    for sl, curve in ((slice(0, n_o), "outer"), (slice(n_o, None), "inner")):
        pts = domain.grid.nodes[sl]
        sc = ax.scatter(pts.real, pts.imag, c=np.angle(values[sl]),
                        cmap="twilight", s=6, vmin=-np.pi, vmax=np.pi)
    for z, style in marks:
        ax.plot([z.real], [z.imag], style, ms=9)
    fig.colorbar(sc, ax=ax, label="arg f")
    ax.set_aspect("equal")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
