"""Figure presets: one scenario file per plotted curve."""
from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources

import numpy as np

from ..spectrum import SpectrumTable, spectrum_sweep
from .config import ScenarioConfig, parse_config
from .sweep import ResultTable, _fmt, emit_csv, run_sweep

__all__ = ["FIGURES", "Figure", "load_preset", "reproduce_figure", "emit_spectrum_csv"]


@dataclass(frozen=True)
class Figure:
    kind: str  # "spectrum" or "g2"
    presets: tuple[str, ...]
    xlabel: str


FIGURES = {
    "fig2": Figure("spectrum", ("fig2",), r"$(\omega_a-\omega_m)/\kappa_m$"),
    "fig3": Figure("spectrum", ("fig3",), r"$g/\kappa_m$"),
    "fig4": Figure("spectrum", ("fig4",), r"$\kappa_a/\kappa_m$"),
    "fig5": Figure("g2", ("fig5_ka_p1", "fig5_ka_m1"), r"$\Delta/\kappa_m$"),
    "fig6": Figure("g2", ("fig6_ka_p1", "fig6_ka_m1", "fig6_ka_m3"), r"$g/\kappa_m$"),
    "fig7": Figure("g2", ("fig7_ka_p3", "fig7_ka_m3"), r"$\chi/\kappa_m$"),
}


def preset_text(name: str) -> str:
    return resources.files("ptmagnon.cli").joinpath("presets", name + ".cfg").read_text()


def load_preset(name: str, overrides: list[str] | None = None) -> ScenarioConfig:
    return parse_config(preset_text(name), overrides)


def spectrum_table(cfg: ScenarioConfig) -> SpectrumTable:
    return spectrum_sweep(cfg.params, cfg.sweep.variable, cfg.sweep.grid())


def emit_spectrum_csv(table: SpectrumTable) -> str:
    lines = [",".join(table.columns)]
    for row in table.rows():
        lines.append(",".join(_fmt(v) for v in row))
    return "\r\n".join(lines) + "\r\n"


def _series_label(cfg: ScenarioConfig) -> str:
    return rf"$\kappa_a/\kappa_m={cfg.params.kappa_a:g}$"


def _plot(fig_id: str, fig: Figure, results, path: str):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if fig.kind == "spectrum":
        (cfg, table), = results
        f, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.2))
        for w, style, name in ((table.omega1, "-", r"\omega_1"), (table.omega2, "--", r"\omega_2")):
            ax1.plot(table.values, w.real, style, label=rf"Re ${name}$")
            ax2.plot(table.values, w.imag, style, label=rf"Im ${name}$")
        ax1.set_ylabel(r"Re$\,\omega/\kappa_m$")
        ax2.set_ylabel(r"Im$\,\omega/\kappa_m$")
        for ax in (ax1, ax2):
            ax.set_xlabel(fig.xlabel)
            ax.legend(fontsize=8)
    else:
        f, axes = plt.subplots(1, 2, figsize=(8, 3.2), sharey=True)
        for k, (cfg, table) in enumerate(results):
            color = f"C{k}"
            x = table.column(cfg.sweep.variable)
            for ax, mode in zip(axes, ("m", "a")):
                y = table.column(f"g2_{mode}_analytic")
                ax.plot(x, np.where(y > 0, y, np.nan), "-", color=color, label=_series_label(cfg))
                y = table.column(f"g2_{mode}_lindblad")
                ax.plot(x, np.where(y > 0, y, np.nan), ":", color=color, lw=2)
        axes[0].set_ylabel(r"$g_m^{(2)}(0)$")
        axes[1].set_ylabel(r"$g_a^{(2)}(0)$")
        for ax in axes:
            ax.set_yscale("log")
            ax.set_xlabel(fig.xlabel)
        axes[0].legend(fontsize=8, title="solid: analytic, dotted: master eq.", title_fontsize=7)
    f.suptitle(fig_id)
    f.tight_layout()
    f.savefig(path, format="svg")
    plt.close(f)


def reproduce_figure(fig_id: str, out_dir: str = ".", jobs: int = 1, overrides=None) -> list[str]:
    """Write one CSV per curve plus ``<fig_id>.svg`` into ``out_dir``; returns the paths."""
    if fig_id not in FIGURES:
        raise KeyError(f"unknown figure {fig_id!r}; choose from {', '.join(FIGURES)}")
    fig = FIGURES[fig_id]
    results = []
    for name in fig.presets:
        cfg = load_preset(name, overrides)
        if fig.kind == "spectrum":
            table: SpectrumTable | ResultTable = spectrum_table(cfg)
        else:
            table = run_sweep(cfg, jobs=jobs)
        results.append((cfg, table))

    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name, (cfg, table) in zip(fig.presets, results):
        path = os.path.join(out_dir, name + ".csv")
        text = emit_spectrum_csv(table) if fig.kind == "spectrum" else emit_csv(table)
        with open(path, "w", newline="") as fh:
            fh.write(text)
        written.append(path)
    svg = os.path.join(out_dir, fig_id + ".svg")
    _plot(fig_id, fig, results, svg)
    written.append(svg)
    return written
