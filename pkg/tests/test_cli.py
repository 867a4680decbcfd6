import json
import subprocess
import sys

import numpy as np
import pytest

from cpbnr.cli import CSV_HEADER, main
from cpbnr.dynamics import Gauge
from cpbnr.model import ModulationKind
from cpbnr.scenario import PRESETS, ConfigError, dump_config, parse_config


def rows(text):
    lines = text.strip().splitlines()
    assert lines[0] == CSV_HEADER
    return np.loadtxt(lines[1:], delimiter=",", ndmin=2)


def preset_rows(listing):
    return {line.split()[0]: line for line in listing.splitlines()[1:] if line.strip()}


def test_list_presets_has_all_panels(capsys):
    assert main(["--list-presets"]) == 0
    table = preset_rows(capsys.readouterr().out)
    assert len(table) == 12
    assert sorted(table) == [f"fig{f}{p}" for f in "2345" for p in "abc"]
    assert "w'=20" in table["fig3b"]
    assert "kappa=0.01" in table["fig4b"] and "delta=0 " in table["fig4b"]
    assert "Fig. 5(c)" in table["fig5c"]


def test_fig2a_parameters():
    cfg = PRESETS["fig2a"].config
    p = cfg.params
    assert (p.omega0, p.omega_c, p.chi0, p.kappa, p.delta) == (20000, 20000, 0.2, 0, 0)
    assert cfg.law.kind is ModulationKind.CONSTANT
    assert abs(cfg.alpha) ** 2 == 25


def test_fig5c_parameters():
    cfg = PRESETS["fig5c"].config
    p = cfg.params
    assert (p.kappa, p.delta, p.epsilon, p.chi0) == (0, 0.01, 0.001, 0.2)
    assert (cfg.law.tau, cfg.law.omega_prime) == (10, 20)
    assert cfg.integrator.t_end == 120


def test_zero_duration_run(capsys):
    assert main(["--preset", "fig2a", "--t-end", "0"]) == 0
    data = rows(capsys.readouterr().out)
    assert data.shape == (1, 5)
    t, inv, ent, nrm, mean_n = data[0]
    assert t == 0 and inv == pytest.approx(1, abs=1e-12)
    assert ent == pytest.approx(0, abs=1e-9)
    assert nrm == pytest.approx(1, abs=1e-12) and mean_n == pytest.approx(25, abs=1e-9)


def test_csv_format(tmp_path):
    out = tmp_path / "traj.csv"
    assert main(["--preset", "fig3c", "--t-end", "0.5", "--stride", "0.1", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER and len(lines) == 7
    # 12 significant digits
    assert all(len(field.lstrip("-").replace(".", "").split("e")[0].lstrip("0")) <= 12
               for field in lines[3].split(","))


def test_metrics_and_plot_script(tmp_path):
    out, met, plot = tmp_path / "a.csv", tmp_path / "a.json", tmp_path / "a.gp"
    argv = ["--preset", "fig2b", "--t-end", "2", "--out", str(out), "--metrics", str(met),
            "--plot-script", str(plot)]
    assert main(argv) == 0
    metrics = json.loads(met.read_text())
    for key in ("plateau_inversion", "entropy_max", "entropy_time_to_1pct_of_max", "final_norm2"):
        assert key in metrics
    assert metrics["final_norm2"] < 1
    script = plot.read_text()
    assert str(out) in script and "'inversion'" in script and "'entropy'" in script


def test_dump_config_round_trip(tmp_path, capsys):
    base = ["--preset", "fig5b", "--t-end", "1.5", "--threads", "1"]
    assert main(base + ["--dump-config"]) == 0
    cfg_path = tmp_path / "fig5b.cfg"
    cfg_path.write_text(capsys.readouterr().out)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(base + ["--out", str(a)]) == 0
    assert main(["--config", str(cfg_path), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_dump_and_parse_are_inverse():
    for preset in PRESETS.values():
        cfg = preset.config
        assert parse_config(dump_config(cfg)) == cfg


def test_explicit_flags_beat_preset(capsys):
    argv = ["--preset", "fig4a", "--t-end", "3", "--stride", "0.5", "--gauge", "direct",
            "--rtol", "1e-8", "--renormalize-entropy", "--dump-config"]
    assert main(argv) == 0
    cfg = parse_config(capsys.readouterr().out)
    assert cfg.integrator.t_end == 3 and cfg.integrator.output_stride == 0.5
    assert cfg.integrator.gauge is Gauge.DIRECT and cfg.integrator.rtol == 1e-8
    assert cfg.entropy_renormalize


def test_effective_config_is_echoed(capsys):
    assert main(["--preset", "fig2a", "--t-end", "0", "--n-max", "40"]) == 0
    err = capsys.readouterr().err
    assert "t_end = 0.0" in err and "n_max = 40" in err


def test_config_error_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("# comment\nchi0 = 0.2\nkappa = lots\n")
    assert main(["--config", str(bad)]) == 2
    assert "line 3" in capsys.readouterr().err


@pytest.mark.parametrize(
    "text, line",
    [("chi0 0.2\n", 1), ("\n\nbogus = 1\n", 3), ("gauge = sideways\n", 1), ("kappa = -1\n", 1)],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.line == line


def test_unknown_preset_and_missing_source(capsys):
    assert main(["--preset", "fig9z"]) == 2
    assert main([]) == 2


def test_unphysical_modulation_exits_3(tmp_path):
    cfg = tmp_path / "wild.cfg"
    cfg.write_text("omega0 = 5\nomega_c = 5\nmodulation = sinusoidal\ntau = 10\nomega_prime = 1\n"
                   "alpha = 1\nt_end = 5\n")
    assert main(["--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == 3


def test_infeasible_explicit_direct_run_exits_3(tmp_path):
    argv = ["--preset", "fig2a", "--gauge", "direct", "--method", "dopri5",
            "--out", str(tmp_path / "x.csv")]
    assert main(argv) == 3


def test_oracle_check_prints_deviation(capsys):
    argv = ["--preset", "fig4c", "--oracle-check", "10", "--t-end", "2"]
    assert main(argv) == 0
    out = capsys.readouterr().out
    dev = float(out.rsplit(":", 1)[1])
    assert dev < 1e-8


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cpbnr", "--preset", "fig2a", "--t-end", "0"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == CSV_HEADER
