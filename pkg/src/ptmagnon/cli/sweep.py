"""Parameter sweeps with both solvers, and CSV output."""
from __future__ import annotations

import csv
import io
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import PTMagnonError
from ..fock import FockSpace
from ..lindblad import (
    DensityMatrix,
    LindbladConfig,
    analyze_steady_state,
    build_liouvillian,
    g2_numeric,
    mean_number,
)
from ..weakdrive import WeakDriveWarning, g2_analytic, steady_amplitudes
from .config import ScenarioConfig

__all__ = ["ResultTable", "SweepError", "run_sweep", "evaluate_point", "emit_csv", "G2_COLUMNS"]

G2_COLUMNS = (
    "g2_m_analytic",
    "g2_a_analytic",
    "g2_m_lindblad",
    "g2_a_lindblad",
    "n_m",
    "n_a",
    "stable_flag",
    "log10_g2_m_analytic",
    "log10_g2_a_analytic",
    "log10_g2_m_lindblad",
    "log10_g2_a_lindblad",
    "g2_m_lindblad_alt",
    "g2_a_lindblad_alt",
)

_OTHER_GAIN = {"negative_rate": "gain_dissipator", "gain_dissipator": "negative_rate"}


class SweepError(PTMagnonError):
    """Every point of a sweep failed."""


@dataclass
class ResultTable:
    columns: list[str]
    rows: np.ndarray
    diagnostics: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=float).reshape(-1, len(self.columns))
        if not self.diagnostics:
            self.diagnostics = [""] * len(self.rows)
        if len(self.diagnostics) != len(self.rows):
            raise ValueError("one diagnostic entry per row required")

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def __len__(self):
        return len(self.rows)


def _log10(v):
    return math.log10(v) if v > 0 else (-math.inf if v == 0 else math.nan)


def _lindblad_point(p, space, gain_model, allow_unstable):
    L = build_liouvillian(p, space, LindbladConfig(gain_model=gain_model))
    rep = analyze_steady_state(L)
    note = rep.diagnostic()
    if not allow_unstable and note:
        return None, rep.stable and rep.positive, note
    rho = DensityMatrix(space, rep.rho)
    return rho, rep.stable and rep.positive, note


def evaluate_point(cfg: ScenarioConfig, x: float | None) -> tuple[dict, str]:
    """All table columns at one sweep value (``x=None``: the base params)."""
    p = cfg.params if x is None else cfg.sweep.apply(cfg.params, x)
    out = dict.fromkeys(G2_COLUMNS, math.nan)
    notes = []

    if cfg.solver in ("analytic", "both"):
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", WeakDriveWarning)
                amps = steady_amplitudes(p)
            notes += [f"weak-drive: {w.message}" for w in caught if issubclass(w.category, WeakDriveWarning)]
            for mode, col in (("magnon", "g2_m_analytic"), ("photon", "g2_a_analytic")):
                try:
                    out[col] = g2_analytic(amps, mode, cfg.g2_variant).value
                except PTMagnonError as exc:
                    notes.append(f"analytic {mode}: {exc}")
            out["n_m"] = amps.mean_number("magnon")
            out["n_a"] = amps.mean_number("photon")
        except PTMagnonError as exc:
            notes.append(f"analytic: {exc}")

    if cfg.solver in ("lindblad", "both"):
        space = FockSpace(*cfg.cutoffs)
        try:
            rho, ok, note = _lindblad_point(p, space, cfg.gain_model, cfg.allow_unstable)
            out["stable_flag"] = 1.0 if ok else 0.0
            if note:
                notes.append(f"lindblad: {note}")
            if rho is not None:
                for mode, col in (("magnon", "g2_m_lindblad"), ("photon", "g2_a_lindblad")):
                    try:
                        out[col] = g2_numeric(rho, mode)
                    except PTMagnonError as exc:
                        notes.append(f"lindblad {mode}: {exc}")
                out["n_m"] = mean_number(rho, "magnon")
                out["n_a"] = mean_number(rho, "photon")
        except PTMagnonError as exc:
            notes.append(f"lindblad: {exc}")
        # the gain models differ only for kappa_a < 0
        if p.kappa_a >= 0:
            out["g2_m_lindblad_alt"] = out["g2_m_lindblad"]
            out["g2_a_lindblad_alt"] = out["g2_a_lindblad"]
        else:
            try:
                rho, _, note = _lindblad_point(p, space, _OTHER_GAIN[cfg.gain_model], cfg.allow_unstable)
                if note:
                    notes.append(f"lindblad alt: {note}")
                if rho is not None:
                    out["g2_m_lindblad_alt"] = g2_numeric(rho, "magnon")
                    out["g2_a_lindblad_alt"] = g2_numeric(rho, "photon")
            except PTMagnonError as exc:
                notes.append(f"lindblad alt: {exc}")

    for src in ("g2_m_analytic", "g2_a_analytic", "g2_m_lindblad", "g2_a_lindblad"):
        out["log10_" + src] = _log10(out[src])
    return out, "; ".join(notes)


def _eval_star(args):
    return evaluate_point(*args)


def run_sweep(cfg: ScenarioConfig, jobs: int = 1) -> ResultTable:
    if cfg.sweep is None:
        raise ValueError("configuration has no sweep block")
    grid = cfg.sweep.grid()
    tasks = [(cfg, float(x)) for x in grid]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_eval_star, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_eval_star(t) for t in tasks]

    columns = [cfg.sweep.variable, *G2_COLUMNS]
    rows = [[x] + [r[c] for c in G2_COLUMNS] for x, (r, _) in zip(grid, results)]
    table = ResultTable(columns, rows, [d for _, d in results])
    requested = [c for c in ("g2_m_analytic", "g2_a_analytic", "g2_m_lindblad", "g2_a_lindblad")
                 if (("analytic" in c and cfg.solver != "lindblad") or ("lindblad" in c and cfg.solver != "analytic"))]
    if len(table) and all(np.all(np.isnan(table.column(c))) for c in requested):
        raise SweepError("all sweep points failed; first diagnostic: " + table.diagnostics[0])
    return table


def _fmt(v: float) -> str:
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".12g")


def emit_csv(table: ResultTable) -> str:
    """CSV with a header row, 12 significant digits and a trailing diagnostic column."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow([*table.columns, "diagnostic"])
    for row, diag in zip(table.rows, table.diagnostics):
        w.writerow([*(_fmt(float(v)) for v in row), diag])
    return buf.getvalue()
