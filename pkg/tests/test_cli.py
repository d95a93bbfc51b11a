import json
import subprocess
import sys

import numpy as np
import pytest

from saftw.cli import main
from saftw.io import read_scalogram_csv, read_signal_csv, read_spectrum_csv, write_signal_csv
from saftw.numerics import SampledSignal
from saftw.params import fourier
from saftw.signals import bump, gaussian


@pytest.fixture
def files(tmp_path):
    g = SampledSignal.from_function(gaussian(), -16.0, 1 / 32, 1024)
    b = SampledSignal.from_function(bump(), -16.0, 1 / 32, 1024)
    write_signal_csv(tmp_path / "g.csv", g)
    write_signal_csv(tmp_path / "b.csv", b)
    return tmp_path


def run_json(capsys, argv):
    code = main(argv + ["--json"])
    return code, json.loads(capsys.readouterr().out)


def test_generate(tmp_path, capsys):
    out = tmp_path / "h.csv"
    code, data = run_json(capsys, ["generate", "hermite", "--params", "n=1", "--grid", "-8:0.0625:257",
                                   "--out", str(out)])
    assert code == 0 and data["samples"] == 257
    h = read_signal_csv(out)
    assert h.x0 == -8 and np.allclose(h.samples, -h.samples[::-1], atol=1e-14)
    assert main(["generate", "hermite", "--params", "n=4", "--out", str(out), "--quiet"]) == 2


def test_saft_isaft_round_trip(files):
    assert main(["saft", "--matrix", "fresnel:2,0.5,0.25", "--in", str(files / "g.csv"),
                 "--out", str(files / "F.csv"), "--path", "fast", "--quiet"]) == 0
    assert main(["isaft", "--matrix", "fresnel:2,0.5,0.25", "--in", str(files / "F.csv"),
                 "--out", str(files / "r.csv"), "--quiet"]) == 0
    g, r = read_signal_csv(files / "g.csv"), read_signal_csv(files / "r.csv")
    assert np.max(np.abs(r.samples - g.samples)) <= 1e-12


def test_saft_direct_grid(files):
    assert main(["saft", "--matrix", "0,1,-1,0,0,0", "--in", str(files / "g.csv"), "--out",
                 str(files / "F.csv"), "--omega", "-6:6:121", "--quiet"]) == 0
    F = read_spectrum_csv(files / "F.csv")
    assert F.n == 121 and np.max(np.abs(F.values - np.exp(-F.omega ** 2 / 2))) <= 1e-8


def test_conv(files, capsys):
    code, data = run_json(capsys, ["conv", "--matrix", "1,2,0,1,0.5,0.25", "--f", str(files / "g.csv"),
                                   "--g", str(files / "g.csv"), "--out", str(files / "h.csv"),
                                   "--check-theorem"])
    assert code == 0 and data["convolution_residual"] <= 1e-4


def test_nsawt_and_invert(files):
    W = files / "W.csv"
    assert main(["nsawt", "--in", str(files / "b.csv"), "--out", str(W), "--scales", "0.25:8:64",
                 "--t", "-48:0.125:769", "--heatmap", str(files / "W.svg"), "--quiet"]) == 0
    assert (files / "W.svg").read_text().startswith("<svg")
    sc = read_scalogram_csv(W, fourier())
    assert sc.coeffs.shape == (769, 64)
    assert main(["nsawt-invert", "--in", str(W), "--out", str(files / "rec.csv"),
                 "--grid", "-16:0.03125:1024", "--quiet"]) == 0
    rec, b = read_signal_csv(files / "rec.csv"), read_signal_csv(files / "b.csv")
    assert np.linalg.norm(rec.samples - b.samples) / np.linalg.norm(b.samples) <= 5e-2


def test_nsawt_spectral_path(files):
    assert main(["nsawt", "--matrix", "fresnel:1.5", "--in", str(files / "b.csv"), "--out",
                 str(files / "S.csv"), "--scales", "0.5:2:4", "--path", "spectral", "--quiet"]) == 0


def test_admissibility(files, capsys):
    code, data = run_json(capsys, ["admissibility", "--in", str(files / "b.csv"),
                                   "--table", str(files / "c.csv")])
    assert code == 0 and data["status"] == "pass"
    assert data["c_psi_mean"] == pytest.approx(0.0510670340222, rel=1e-6)
    assert (files / "c.csv").read_text().startswith("omega,c_psi\n")
    code, data = run_json(capsys, ["admissibility", "--wavelet", "gaussian", "--omega", "1:4:4"])
    assert code == 1 and data["status"] == "divergent"
    code, data = run_json(capsys, ["admissibility", "--matrix", "fresnel:2", "--in", str(files / "b.csv")])
    assert code == 1 and data["status"] == "spread-too-large"


def test_moyal_and_range(files, capsys):
    code, data = run_json(capsys, ["moyal-check", "--f", str(files / "b.csv")])
    assert code == 0 and data["moyal_residual"] <= 5e-2
    code, data = run_json(capsys, ["range-check", "--in", str(files / "b.csv"), "--noise-seed", "3"])
    assert code == 0 and data["range_residual"] <= 8e-2 and data["noise_residual"] >= 0.5


def test_moyal_chirped_matrix_fails_gate(files, capsys):
    code, data = run_json(capsys, ["moyal-check", "--matrix", "fresnel:2", "--f", str(files / "b.csv")])
    assert code == 1 and data["error"].startswith("AdmissibilitySpreadTooLarge")


def test_localize(capsys):
    code, data = run_json(capsys, ["localize", "--wavelet", "cmorlet", "--t", "3", "--zeta", "2"])
    assert code == 0
    assert abs(data["measured_center"] - data["predicted_center"]) <= 1e-6
    assert data["box_area"] > 0 and isinstance(data["q_factor"], float)
    code, data = run_json(capsys, ["localize", "--wavelet", "morlet", "--zeta", "1"])
    assert code == 0 and data["q_factor"].startswith("undefined")


def test_uncertainty(files, capsys):
    code, data = run_json(capsys, ["uncertainty", "--in", str(files / "g.csv"), "--check", "heisenberg"])
    assert code == 0 and data["ratio"] == pytest.approx(1, abs=1e-3)
    code, data = run_json(capsys, ["uncertainty", "--in", str(files / "g.csv"), "--check", "pitt:0.5"])
    assert code == 0 and data["ratio"] >= 1
    code, data = run_json(capsys, ["uncertainty", "--in", str(files / "g.csv"), "--check", "nsawt"])
    assert code == 0 and data["ratio"] >= 0.95 and "ratio_with_c" in data
    code, data = run_json(capsys, ["uncertainty", "--battery", "--out", str(files / "u.csv")])
    assert code == 0 and data["failures"] == 0
    assert (files / "u.csv").read_text().startswith("signal,matrix,check,lhs,rhs,ratio,status\n")
    assert main(["uncertainty", "--in", str(files / "g.csv"), "--check", "pitt:1", "--quiet"]) == 2


def test_exit_codes(files, capsys):
    assert main(["saft", "--matrix", "1,1,1,1,0,0", "--in", str(files / "g.csv"),
                 "--out", str(files / "F.csv")]) == 2
    assert "NonUnimodular" in capsys.readouterr().err
    assert main(["saft", "--in", str(files / "missing.csv"), "--out", str(files / "F.csv")]) == 2
    assert main(["no-such-command"]) == 2
    assert main(["saft"]) == 2


def test_negative_b_warns(files):
    with pytest.warns(UserWarning, match="B < 0"):
        main(["saft", "--matrix", "1,-2,0,1,0,0", "--in", str(files / "g.csv"),
              "--out", str(files / "F.csv"), "--path", "fast"])


def test_global_flags_before_subcommand(files, capsys):
    code = main(["--json", "--matrix", "fourier", "uncertainty", "--in", str(files / "g.csv")])
    assert code == 0 and json.loads(capsys.readouterr().out)["name"] == "heisenberg"


def test_verify_all_bad_matrix(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["verify-all", "--matrix", "1,1,1,1,0,0", "--out", str(out), "--quiet"]) == 2
    lines = out.read_text().splitlines()
    assert lines[0] == "check,value,relation,tolerance,status,note"
    assert lines[1].startswith("config,") and "NonUnimodular" in lines[1]


def test_verify_all_gaussian_mother(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[nsawt]\nwavelet = gaussian\n[verify]\nrandom_matrices = 2\n")
    out = tmp_path / "r.csv"
    assert main(["verify-all", "--config", str(cfg), "--out", str(out), "--quiet"]) == 1
    rows = {ln.split(",")[0]: ln for ln in out.read_text().splitlines()[1:]}
    assert rows["admissibility"].split(",")[4] == "fail"
    assert "DivergentAdmissibility" in rows["admissibility"]
    for name in ("fourier_gaussian_fast", "parseval", "convolution_fourier", "heisenberg_min_ratio"):
        assert rows[name].split(",")[4] == "pass"


def test_console_script(files):
    res = subprocess.run([sys.executable, "-m", "saftw.cli", "generate", "gaussian",
                          "--out", str(files / "x.csv"), "--quiet"], capture_output=True)
    assert res.returncode == 0 and (files / "x.csv").exists()
