import csv
import json

import pytest

from vdw_resonance.cli import main


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# config: ")
    config = json.loads(lines[0][len("# config: "):])
    body = [line for line in lines[1:] if not line.startswith("#")]
    rows = list(csv.reader(body))
    return config, rows[0], rows[1:]


def write(tmp_path, text):
    p = tmp_path / "run.ini"
    p.write_text(text)
    return str(p)


def test_coeffs(tmp_path, capsys):
    assert main(["coeffs", "--out", str(tmp_path)]) == 0
    config, header, rows = read_csv(tmp_path / "coeffs.csv")
    assert header[:6] == ["delta", "b", "c0", "G", "Lambda", "Gamma"]
    assert float(rows[0][4]) == pytest.approx(1.4198591479439079, abs=1e-15)
    assert config["gas"]["b"] == 0.0
    assert "Lambda" in capsys.readouterr().out


def test_dispersion(tmp_path):
    cfg = write(tmp_path, "[run]\nscenario = dispersion\n[kernel]\ncoefficients = 1, 0.5\n[dispersion]\nk_max = 3\n")
    assert main(["--config", cfg, "--out", str(tmp_path)]) == 0
    _, header, rows = read_csv(tmp_path / "dispersion.csv")
    assert header == ["k", "omega"]
    assert [int(r[0]) for r in rows] == [-3, -2, -1, 1, 2, 3]


def test_travwave_family_tables(tmp_path):
    cfg = write(tmp_path, "[run]\nscenario = travwave\n[travwave]\nb_values = 0, 0.02, 0.04\n[solver]\nN = 64\n")
    assert main(["--config", cfg, "--out", str(tmp_path)]) == 0
    for tag in ("b0", "b0.02", "b0.04"):
        _, header, rows = read_csv(tmp_path / f"family_{tag}.csv")
        assert header == ["alpha", "gamma", "s", "A"]
        s = [float(r[2]) for r in rows]
        assert all(a > b for a, b in zip(s, s[1:]))
        assert (tmp_path / f"profile_{tag}_alpha0.6.csv").exists()


def test_evolve_writes_snapshots_and_diagnostics(tmp_path):
    cfg = write(
        tmp_path,
        "[run]\nscenario = evolve\n[solver]\nN = 64\nsnapshot_times = 0, 0.15, 0.35, 0.8\n"
        "[initial]\nharmonics = (1, 0, 2, 0); (2, 3, 0, -2)\n",
    )
    assert main(["--config", cfg, "--out", str(tmp_path / "a")]) == 0
    _, header, rows = read_csv(tmp_path / "a" / "snapshots.csv")
    assert [float(r[1]) for r in rows] == [0.0, 0.15, 0.35, 0.8]
    _, header, rows = read_csv(tmp_path / "a" / "snapshots" / "snapshot_00002.csv")
    assert header == ["x", "sigma"] and len(rows) == 64
    _, header, rows = read_csv(tmp_path / "a" / "diagnostics.csv")
    assert header[-2:] == ["dist_to_family", "best_alpha"]
    assert len(rows) == 4

    # identical config gives identical bytes
    assert main(["--config", cfg, "--out", str(tmp_path / "b")]) == 0
    for name in ("diagnostics.csv", "snapshots/snapshot_00003.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_evolve_pair(tmp_path):
    cfg = write(tmp_path, "[run]\nscenario = evolve-pair\n[solver]\nN = 64\nt_end = 1\n[initial]\nharmonics = (1, 0, 1, 0)\n")
    assert main(["--config", cfg, "--out", str(tmp_path)]) == 0
    _, header, rows = read_csv(tmp_path / "diagnostics.csv")
    assert header[-1] == "mirror_error"
    assert float(rows[-1][-1]) < 1e-12


def test_attractor_report(tmp_path):
    cfg = write(
        tmp_path,
        "[run]\nscenario = attractor\n[solver]\nN = 128\nt_end = 10\nsnapshot_interval = 0.1\n"
        "[initial]\nharmonics = (1, 0, 0.4, 0)\n[attractor]\nalpha_grid_size = 11\n",
    )
    assert main(["--config", cfg, "--out", str(tmp_path)]) == 0
    text = (tmp_path / "attractor_report.txt").read_text()
    assert "nearest traveling wave" in text


def test_sweep_without_evolution(tmp_path):
    cfg = write(tmp_path, "[run]\nscenario = sweep\n[sweep]\nevolve = false\n[solver]\nN = 64\n")
    assert main(["--config", cfg, "--out", str(tmp_path)]) == 0
    for tag in ("b0", "b0.02", "b0.04"):
        assert (tmp_path / tag / f"family_{tag}.csv").exists()


def test_validation_exit_code(tmp_path, capsys):
    cfg = write(tmp_path, "[gas]\nb = 1.2\n")
    assert main(["--config", cfg]) == 1
    assert "gas.b" in capsys.readouterr().err


def test_missing_initial_condition_exit_code(capsys):
    assert main(["evolve"]) == 1


def test_numerical_failure_exit_code(tmp_path, monkeypatch):
    from vdw_resonance import cli
    from vdw_resonance.errors import NonFiniteStateError

    def boom(config, out):
        raise NonFiniteStateError(1.0)

    monkeypatch.setitem(cli.RUNNERS, "coeffs", boom)
    assert main(["coeffs", "--out", str(tmp_path)]) == 2


def test_seed_check(capsys):
    assert main(["--seed-check"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 4
