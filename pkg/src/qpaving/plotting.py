"""PNG figures for landscapes, spectrograms and interference matrices.

Everything that touches matplotlib lives here, behind the Agg backend, so the
numerical modules never import it.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .gabor.bounds import ambiguity_gauss  # noqa: E402


def _save(fig, path):
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


def landscape_heatmap(landscape, path, value: str = "ratio") -> None:
    """Scatter-heatmap of a shape scan over the fundamental domain."""
    pts = [s for s in landscape.samples if not s.flagged]
    x = np.array([s.shape.x for s in pts])
    y = np.array([s.shape.y for s in pts])
    v = np.array([getattr(s, value) for s in pts])
    fig, ax = plt.subplots(figsize=(5, 5))
    sc = ax.scatter(x, y, c=v, s=18, marker="s", cmap="viridis")
    arc = np.linspace(0, 0.5, 100)
    ax.plot(arc, np.sqrt(1 - arc ** 2), color="k", lw=0.8)
    ax.plot([landscape.argopt.x], [landscape.argopt.y], marker="*", color="red", ms=12,
            label="optimum")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"{value}, density {landscape.density:g}, {landscape.objective.kind}")
    ax.legend(loc="upper right")
    fig.colorbar(sc, ax=ax, label=value)
    _save(fig, path)


def theta_landscape(L, path, which: str = "dual_phase", n: int = 96) -> None:
    """Heatmap of one theta function over a period cell of ``L``."""
    from .theta import cell_grid, evaluator, period_lattice

    P = period_lattice(L, which)
    Z = cell_grid(P, n)
    vals = evaluator(L, which)(Z).reshape(n, n)
    fig, ax = plt.subplots(figsize=(5, 4))
    im = ax.imshow(vals.T, origin="lower", extent=[0, 1, 0, 1], cmap="magma")
    ax.set_xlabel("cell coordinate 1")
    ax.set_ylabel("cell coordinate 2")
    ax.set_title(f"{which} theta of {L.name or 'lattice'}")
    fig.colorbar(im, ax=ax)
    _save(fig, path)


def spectrogram(path, lattice=None, extent: float = 3.0, n: int = 241) -> None:
    """``|V_phi phi(z)|^2`` over the plane, with lattice points overlaid if given."""
    u = np.linspace(-extent, extent, n)
    X, W = np.meshgrid(u, u, indexing="ij")
    Z = np.stack([X, W], axis=-1)
    S = np.abs(ambiguity_gauss(Z)) ** 2
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.imshow(S.T, origin="lower", extent=[-extent, extent, -extent, extent], cmap="Greys")
    if lattice is not None:
        from .lattice import enumerate_points

        pts = enumerate_points(lattice, extent * math.sqrt(2))
        inside = np.all(np.abs(pts) <= extent, axis=1)
        ax.scatter(pts[inside, 0], pts[inside, 1], s=8, color="tab:red")
    ax.set_xlabel("time x")
    ax.set_ylabel("frequency omega")
    ax.set_title("|V phi phi|^2")
    _save(fig, path)


def interference_plot(report, path) -> None:
    """``log10 |<H g_mu, f_nu>|`` for the interior rows of an interference report."""
    M = np.abs(report.matrix[report.interior])
    fig, ax = plt.subplots(figsize=(6, 4))
    im = ax.imshow(np.log10(M + 1e-300), aspect="auto", cmap="viridis", vmin=-8, vmax=0)
    ax.set_xlabel("transmitted symbol")
    ax.set_ylabel("received symbol (interior)")
    ax.set_title(f"{report.lattice_id}: SIR {report.sir_db:.2f} dB")
    fig.colorbar(im, ax=ax, label="log10 |entry|")
    _save(fig, path)
