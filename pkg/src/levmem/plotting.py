"""Minimal, byte-reproducible SVG figures."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams.update({
    "svg.hashsalt": "levmem",
    "svg.fonttype": "path",
    "font.size": 9,
    "axes.grid": False,
    "figure.dpi": 100,
})

SIZE = (5.0, 3.6)


def save(fig, path):
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None}, bbox_inches=None)
    plt.close(fig)
    return path


def line_plot(path, x, series, xlabel, ylabel, logx=False, logy=False, title=None):
    fig, ax = plt.subplots(figsize=SIZE, layout="constrained")
    for label, y in series.items():
        ax.plot(x, y, label=label, lw=1.3)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if len(series) > 1:
        ax.legend(frameon=False)
    if title:
        ax.set_title(title)
    return save(fig, path)


def heatmap(path, x, y, Z, xlabel, ylabel, zlabel, logx=False, title=None):
    """``Z[j, i]`` is the value at ``(x[i], y[j])``."""
    fig, ax = plt.subplots(figsize=SIZE, layout="constrained")
    mesh = ax.pcolormesh(np.asarray(x), np.asarray(y), np.ma.masked_invalid(Z),
                         shading="nearest", cmap="viridis", rasterized=True)
    fig.colorbar(mesh, ax=ax, label=zlabel)
    if logx:
        ax.set_xscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    return save(fig, path)


def storage_plot(path, t, G_w, G_r, optical, mechanical):
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(5.0, 5.0), sharex=True, layout="constrained")
    t_ms = np.asarray(t) * 1e3
    top.plot(t_ms, G_w, lw=1.3, label="write")
    top.plot(t_ms, G_r, lw=1.3, ls="--", label="read")
    top.set_ylabel("coupling (rad/s)")
    top.legend(frameon=False)
    bottom.plot(t_ms, optical, lw=1.3, label="optical")
    bottom.plot(t_ms, mechanical, lw=1.3, ls=":", label="mechanical")
    bottom.set_xlabel("t (ms)")
    bottom.set_ylabel("power (norm.)")
    bottom.legend(frameon=False)
    return save(fig, path)
