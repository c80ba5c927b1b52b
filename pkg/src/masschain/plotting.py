"""SVG rendering.  Every figure is drawn from the CSV/JSON files on disk only,
so a figure can always be regenerated from its data files, byte for byte."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import numpy as np
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from .report import read_csv, read_json

RC = {
    "svg.hashsalt": "masschain",
    "svg.fonttype": "path",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.0,
}
DEVICE_COLOURS = ["tab:red", "tab:blue", "tab:green", "tab:purple", "tab:orange"]


def _save(fig, svg_path):
    svg_path = Path(svg_path)
    svg_path.parent.mkdir(parents=True, exist_ok=True)
    FigureCanvasSVG(fig)
    fig.savefig(svg_path, format="svg", metadata={"Date": None})
    return svg_path


def _new_figure(size=(5.0, 3.6)):
    fig = Figure(figsize=size)
    return fig, fig.add_subplot(1, 1, 1)


def render_response(csv_path, json_path, svg_path):
    with matplotlib.rc_context(RC):
        header, data = read_csv(csv_path)
        meta = read_json(json_path)
        fig, ax = _new_figure()
        for k, name in enumerate(header[1:], start=1):
            ax.semilogx(data[:, 0], data[:, k], label=name)
        ax.axhline(1.0, color="0.5", ls=":", lw=0.8)
        ax.set_xlabel(r"$\omega$ [rad/s]")
        ax.set_ylabel(r"$\max_i |F_N^{(i)}(h(j\omega))|$")
        ax.set_title(meta.get("title", ""))
        ax.legend(loc="best", frameon=False)
        fig.tight_layout()
        return _save(fig, svg_path)


def render_contour(json_path, svg_path):
    """Level curves, the excluded cut and any Nyquist overlays from the contour JSON."""
    with matplotlib.rc_context(RC):
        meta = read_json(json_path)
        fig, ax = _new_figure((5.0, 4.6))
        re0, re1, im0, im1 = meta["region"]
        levels = sorted({c["ln_gamma"] for c in meta["contours"]})
        cmap = matplotlib.colormaps["viridis"]
        span = (levels[-1] - levels[0]) or 1.0
        i_styles = ["-", "--", "-.", ":", (0, (5, 1, 1, 1))]
        for c in meta["contours"]:
            colour = cmap((c["ln_gamma"] - levels[0]) / span)
            style = i_styles[(c.get("i", 1) - 1) % len(i_styles)]
            longest = None
            for line in c["polylines"]:
                arr = np.asarray(line, dtype=float)
                if arr.size == 0:
                    continue
                ax.plot(arr[:, 0], arr[:, 1], color=colour, ls=style, lw=0.7)
                if longest is None or len(arr) > len(longest):
                    longest = arr
            if longest is not None:
                x, y = longest[len(longest) // 2]
                ax.text(x, y, f"{c['ln_gamma']:g}", fontsize=5, color=colour)
        if re0 < -0.25:
            ax.plot([re0, min(-0.25, re1)], [0, 0], color="k", lw=1.6)
        for k, loc in enumerate(meta.get("nyquist", [])):
            re, im = np.asarray(loc["re"]), np.asarray(loc["im"])
            keep = (re >= re0) & (re <= re1) & (im >= im0) & (im <= im1)
            ax.plot(np.where(keep, re, np.nan), np.where(keep, im, np.nan),
                    color=DEVICE_COLOURS[k % len(DEVICE_COLOURS)], lw=1.4, label=loc["device"])
        if meta.get("nyquist"):
            ax.legend(loc="lower left", frameon=False, fontsize=7)
        ax.set_xlim(re0, re1)
        ax.set_ylim(im0, im1)
        ax.set_aspect("equal")
        ax.set_xlabel(r"Re $g$")
        ax.set_ylabel(r"Im $g$")
        ax.set_title(meta.get("title", meta["metric"]))
        fig.tight_layout()
        return _save(fig, svg_path)


def render_nyquist(csv_path, json_path, svg_path):
    with matplotlib.rc_context(RC):
        header, data = read_csv(csv_path)
        meta = read_json(json_path)
        fig, ax = _new_figure((5.0, 4.6))
        for k, name in enumerate(meta["devices"]):
            ax.plot(data[:, 1 + 2 * k], data[:, 2 + 2 * k],
                    color=DEVICE_COLOURS[k % len(DEVICE_COLOURS)], label=name)
        ax.plot([-0.25], [0], "k+", ms=6)
        if "view" in meta:
            ax.set_xlim(*meta["view"][:2])
            ax.set_ylim(*meta["view"][2:])
        ax.set_xlabel(r"Re $g(j\omega)$")
        ax.set_ylabel(r"Im $g(j\omega)$")
        ax.set_title(meta.get("title", "Nyquist diagram of g"))
        ax.legend(loc="best", frameon=False)
        fig.tight_layout()
        return _save(fig, svg_path)


def render_bound(csv_path, json_path, svg_path):
    with matplotlib.rc_context(RC):
        header, data = read_csv(csv_path)
        meta = read_json(json_path)
        fig, ax = _new_figure()
        for k, name in enumerate(header[1:], start=1):
            ax.loglog(data[:, 0], data[:, k], label=name)
        rep = meta["report"]
        ax.axhline(rep["global_bound"], color="k", ls="--", lw=0.8, label="global bound")
        ax.axvline(rep["taylor"]["omega0"], color="0.5", ls=":", lw=0.8)
        ax.set_xlabel(r"$\omega$ [rad/s]")
        ax.set_ylabel(r"$\max_N |F_N^{(i)}(h(j\omega))|$")
        ax.set_title(meta.get("title", ""))
        ax.legend(loc="best", frameon=False, fontsize=7)
        fig.tight_layout()
        return _save(fig, svg_path)
