import csv
import io
import math
import os

import numpy as np
import pytest

from ptmagnon import ConfigError, SystemParams
from ptmagnon.cli import ResultTable, emit_csv, evaluate_point, parse_config, reproduce_figure, run_sweep
from ptmagnon.cli.figures import FIGURES, load_preset
from ptmagnon.cli.main import main
from ptmagnon.fock import FockSpace
from ptmagnon.lindblad import build_liouvillian, g2_numeric, steady_state
from ptmagnon.weakdrive import g2_analytic, steady_amplitudes

SMALL = """
params.kappa_a = 1
params.chi = 0.1
cutoffs.magnon = 3
cutoffs.photon = 3
sweep.variable = delta
sweep.from = 1
sweep.to = 2
sweep.points = 3
"""


def test_minimal_config_defaults():
    cfg = parse_config("sweep.variable = g\nsweep.from = 0\nsweep.to = 1\n")
    assert cfg.params.kappa_m == 1.0
    assert cfg.cutoffs == (5, 5)
    assert (cfg.solver, cfg.g2_variant, cfg.gain_model) == ("both", "amplitude_sum", "negative_rate")
    assert cfg.sweep.points == 201


@pytest.mark.parametrize(
    "text,key,line",
    [
        ("sweep.variable = g\nsweep.from = 0\nsweep.to = 1\nsweep.points = 0\n", "sweep.points", 4),
        ("\nparams.bogus = 1\n", "params.bogus", 2),
        ("params.g = abc\n", "params.g", 1),
        ("params.g = -1\n", "params.g", 1),
        ("solver = fast\n", "solver", 1),
        ("sweep.variable = g\nsweep.from = 2\nsweep.to = 1\n", "sweep.from", 2),
        ("cutoffs.magnon = 0\n", "cutoffs.magnon", 1),
    ],
)
def test_config_errors_name_key_and_line(text, key, line):
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.key == key
    assert exc.value.line == line
    assert key in str(exc.value)


def test_fig5_preset_values():
    cfg = load_preset("fig5_ka_m1")
    p = cfg.params
    assert (p.g, p.chi, p.omega_d_amp, p.kappa_a, p.kappa_m) == (1.0, 0.1, 0.01, -1.0, 1.0)
    assert (cfg.sweep.variable, cfg.sweep.start, cfg.sweep.stop) == ("delta", -5.0, 5.0)


def test_presets_match_figure_parameters():
    fig6 = [load_preset(n).params for n in FIGURES["fig6"].presets]
    assert sorted(p.kappa_a for p in fig6) == [-3.0, -1.0, 1.0]
    assert all((p.delta_a, p.delta_m, p.chi) == (0.0, 0.0, 0.1) for p in fig6)
    fig7 = [load_preset(n) for n in FIGURES["fig7"].presets]
    assert sorted(c.params.kappa_a for c in fig7) == [-3.0, 3.0]
    assert all(c.params.g == 2.0 and c.sweep.variable == "chi" for c in fig7)
    fig2 = load_preset(FIGURES["fig2"].presets[0])
    assert (fig2.params.kappa_a, fig2.params.g) == (-1.0, 1.0)


def test_empty_table_is_header_only():
    text = emit_csv(ResultTable(["g", "g2"], np.zeros((0, 2))))
    assert text == "g,g2,diagnostic\r\n"


def test_csv_round_trip_and_formatting():
    t = ResultTable(["x", "y", "z"], [[1 / 3, math.nan, -math.inf]], ["a, quoted \"note\""])
    rows = list(csv.reader(io.StringIO(emit_csv(t))))
    assert rows[0] == ["x", "y", "z", "diagnostic"]
    assert rows[1] == ["0.333333333333", "nan", "-inf", 'a, quoted "note"']
    assert float(rows[1][0]) == pytest.approx(1 / 3, rel=1e-12)


def test_one_point_sweep_equals_direct_calls():
    cfg = parse_config(SMALL + "sweep.points = 1\nsweep.to = 1\n")
    t = run_sweep(cfg)
    p = SystemParams(kappa_a=1.0, chi=0.1).with_delta(1.0)
    amps = steady_amplitudes(p)
    rho = steady_state(build_liouvillian(p, FockSpace(3, 3)))
    assert t.column("g2_m_analytic")[0] == g2_analytic(amps, "magnon").value
    assert t.column("g2_a_analytic")[0] == g2_analytic(amps, "photon").value
    assert t.column("g2_m_lindblad")[0] == pytest.approx(g2_numeric(rho, "magnon"), rel=1e-12)
    assert t.column("stable_flag")[0] == 1.0
    row, _ = evaluate_point(cfg, 1.0)
    assert row["g2_m_analytic"] == t.column("g2_m_analytic")[0]


def test_deterministic_and_independent_of_jobs():
    cfg = parse_config(SMALL)
    a = emit_csv(run_sweep(cfg, jobs=1))
    assert a == emit_csv(run_sweep(cfg, jobs=1))
    assert a == emit_csv(run_sweep(cfg, jobs=2))


def test_unstable_points_are_flagged_not_dropped():
    cfg = parse_config(SMALL.replace("params.kappa_a = 1", "params.kappa_a = -1") + "sweep.from = -0.5\nsweep.to = 0.5\n")
    t = run_sweep(cfg)
    assert np.all(np.isnan(t.column("g2_m_lindblad")))
    assert np.all(np.isfinite(t.column("g2_m_analytic")))
    assert np.all(t.column("stable_flag") == 0.0)
    assert all("unstable" in d for d in t.diagnostics)


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["ep", "--set", "params.kappa_a=-1"]) == 0
    assert capsys.readouterr().out.strip() == "g = 1"
    assert main(["spectrum", "--set", "params.kappa_a=-1", "--set", "params.g=2"]) == 0
    assert "1.73205080757" in capsys.readouterr().out
    assert main(["g2", "--set", "params.nope=1"]) == 1
    assert main(["g2", "--set", "params.g=-1"]) == 1
    assert main(["g2", "--jobs", "0"]) == 1
    assert main(["g2", "--config", str(tmp_path / "missing.cfg")]) == 3
    assert main(["ep", "--set", "params.kappa_a=-1", "--bracket", "2", "3"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_cli_writes_csv(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text(SMALL)
    assert main(["g2", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    text = (tmp_path / "o" / "g2.csv").read_text()
    assert text.startswith("delta,g2_m_analytic,")
    assert main(["supermode", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "supermode.csv").exists()


def test_reproduce_spectrum_figure(tmp_path):
    paths = reproduce_figure("fig2", str(tmp_path))
    names = sorted(os.path.basename(p) for p in paths)
    assert "fig2.svg" in names
    svg = (tmp_path / "fig2.svg").read_text()
    assert svg.lstrip().startswith("<?xml") and "<svg" in svg
    csv_path = next(p for p in paths if p.endswith(".csv"))
    rows = list(csv.reader(open(csv_path)))
    assert rows[0] == ["value", "re_w1", "im_w1", "re_w2", "im_w2"]
    assert len(rows) == 202


def test_reproduce_statistics_figure_reduced(tmp_path):
    paths = reproduce_figure("fig5", str(tmp_path), overrides=["sweep.points=3"])
    assert sum(p.endswith(".csv") for p in paths) == 2
    assert (tmp_path / "fig5.svg").exists()
    with pytest.raises(KeyError):
        reproduce_figure("fig9", str(tmp_path))
