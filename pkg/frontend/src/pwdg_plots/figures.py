"""Figure builders: semilog convergence curves and field heatmap panels."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import COMPARE_HEADER, read_field_components, read_profile, read_sweep_csv

_SWEEP_LABEL = {"p": "plane-wave directions p", "h": "mesh width h",
                "m": "DtN truncation order M", "generic": "sweep value"}


def convergence_figure(csv_path, kind="generic", title=None):
    """Semilog-y L2/H1 error curves; h-sweeps get a slope-2 guide line."""
    data = read_sweep_csv(csv_path)
    x = data["sweep"]
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.semilogy(x, data["l2_rel"], "o-", label="relative $L^2$ error")
    ax.semilogy(x, data["h1_rel"], "s--", label="relative $H^1$ error")
    if kind == "h":
        ax.set_xscale("log")
        finite = np.isfinite(data["l2_rel"])
        anchor_x = x[finite][0]
        anchor_y = data["l2_rel"][finite][0]
        guide = anchor_y * (x / anchor_x) ** 2
        ax.loglog(x, guide, ":", color="gray", label=r"slope $h^2$ guide")
    ax.set_xlabel(_SWEEP_LABEL.get(kind, _SWEEP_LABEL["generic"]))
    ax.set_ylabel("relative error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return fig


def compare_figure(csv_path, title=None):
    """Side-by-side DtN vs impedance error curves from a compare CSV."""
    data = read_sweep_csv(csv_path, header=COMPARE_HEADER)
    x = data["sweep"]
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.semilogy(x, data["l2_rel_dtn"], "o-", label="DtN-PWDG $L^2$")
    ax.semilogy(x, data["l2_rel_imp"], "s--", label="impedance-PWDG $L^2$")
    ax.set_xlabel(_SWEEP_LABEL["p"])
    ax.set_ylabel("relative error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return fig


def field_figure(component_paths, profile_path=None, title=None):
    """One heatmap panel per component file, profile overlaid dotted."""
    xs, ys, fields = read_field_components(component_paths)
    polylines = read_profile(profile_path) if profile_path else []
    n = len(fields)
    fig, axes = plt.subplots(n, 1, figsize=(7.5, 2.2 * n + 0.8),
                             squeeze=False)
    extent = (xs[0], xs[-1], ys[0], ys[-1])
    for ax, values, path in zip(axes[:, 0], fields, component_paths):
        im = ax.imshow(values, origin="lower", extent=extent, aspect="auto",
                       cmap="RdBu_r")
        for poly in polylines:
            ax.plot(poly[:, 0], poly[:, 1], ":", color="black", linewidth=1.2)
        ax.set_xlim(extent[0], extent[1])
        ax.set_ylim(extent[2], extent[3])
        ax.set_ylabel("$x_2$")
        ax.set_title(_component_label(path), fontsize=9, loc="left")
        fig.colorbar(im, ax=ax, shrink=0.9)
    axes[-1, 0].set_xlabel("$x_1$")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    return fig


def _component_label(path):
    name = str(path).rsplit("/", 1)[-1]
    for tag, label in (("_re", "real part"), ("_im", "imaginary part"),
                       ("_abs", "absolute value")):
        if tag in name:
            return f"{label}  ({name})"
    return name


def save_figure(fig, out_path, dpi=150):
    fig.savefig(out_path, dpi=dpi, metadata={"Software": "pwdg-plots"})
    plt.close(fig)
    return out_path
