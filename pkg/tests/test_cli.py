"""Integration tests for the command-line interface."""
from __future__ import annotations

import json
import os
import shutil
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from cjkit.channel import Channel, apply_heisenberg, depolarizing, identity_channel
from cjkit.cli import main
from cjkit.io import channel_from_json, channel_to_json, choi_from_json, dumps, matrix_to_json, write_text
from cjkit.linalg import fro
from cjkit.states import gns_vector, make_reference, maximally_mixed

from conftest import random_channel

GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def work(tmp_path):
    for p in GOLDEN.glob("*.json"):
        shutil.copy(p, tmp_path / p.name)
    old = os.getcwd()
    os.chdir(tmp_path)
    yield tmp_path
    os.chdir(old)


def run(*argv, capsys=None):
    code = main(list(argv))
    out = capsys.readouterr().out if capsys is not None else None
    return code, out


def write(path, obj):
    write_text(path, dumps(obj))


# --- golden files ---------------------------------------------------------


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["convert", "--from", "kraus", "--to", "choi", "identity_kraus.json"], "identity_choi.json"),
        (["convert", "--from", "kraus", "--to", "choi", "--rho0", "rho0_diag.json", "amp_damp_kraus.json"], "amp_damp_choi.json"),
        (["convert", "--from", "choi", "--to", "kraus", "amp_damp_choi.json"], "amp_damp_minimal.json"),
        (["phase-family", "build", "tau_rotation.json"], "rotation_channel.json"),
        (["transpose", "--rho0", "rho0_diag.json", "amp_damp_kraus.json"], "amp_damp_transposed.json"),
    ],
)
def test_golden_outputs(work, capsys, argv, expected):
    code, out = run(*argv, capsys=capsys)
    assert code == 0
    assert out == (work / expected).read_text()


def test_golden_files_reserialise_byte_stably():
    for p in sorted(GOLDEN.glob("*.json")):
        text = p.read_text()
        assert dumps(json.loads(text)) == text, p.name


def test_convert_roundtrip(work, capsys):
    # numerically the double round trip is the identity; rounding noise may differ in the last bits
    assert run("convert", "--from", "choi", "--to", "kraus", "amp_damp_choi.json", "k.json")[0] == 0
    assert run("convert", "--from", "kraus", "--to", "choi", "--rho0", "rho0_diag.json", "k.json", "c.json")[0] == 0
    s1 = choi_from_json(json.loads((work / "amp_damp_choi.json").read_text()))
    s2 = choi_from_json(json.loads((work / "c.json").read_text()))
    assert fro(s1.matrix - s2.matrix) <= 1e-9
    # and repeating the same conversion reproduces the same bytes
    assert run("convert", "--from", "choi", "--to", "kraus", "amp_damp_choi.json", "k2.json")[0] == 0
    assert (work / "k.json").read_bytes() == (work / "k2.json").read_bytes()


def test_identity_choi_is_omega(work):
    s = choi_from_json(json.loads((work / "identity_choi.json").read_text()))
    om = gns_vector(maximally_mixed(2))
    assert fro(s.matrix - np.outer(om, om)) <= 1e-15


def test_uniform_choi_gives_depolarizing(work, capsys, rng):
    d = 3
    write("u.json", {"d_in": d, "d_out": d, "choi": matrix_to_json(np.eye(d * d) / d**2)})
    code, out = run("convert", "--from", "choi", "--to", "kraus", "u.json", capsys=capsys)
    assert code == 0
    c = channel_from_json(json.loads(out))
    assert len(c) == d * d
    b = rng.normal(size=(d, d))
    assert fro(apply_heisenberg(c, b) - np.trace(b) / d * np.eye(d)) <= 1e-12


def test_every_output_reparses(work, capsys, rng):
    write("r.json", channel_to_json(random_channel(2, 3, rng)))
    outputs = []
    for argv in (
        ["convert", "--from", "kraus", "--to", "choi", "r.json"],
        ["convert", "--from", "kraus", "--to", "kraus", "r.json"],
        ["transpose", "r.json"],
        ["transpose", "--commutant", "r.json"],
        ["check", "r.json"],
        ["info", "r.json"],
    ):
        code, out = run(*argv, capsys=capsys)
        assert code == 0, argv
        outputs.append(out)
    for out in outputs:
        obj = json.loads(out)
        assert dumps(obj) == out
    json.loads(outputs[0])
    write("t.json", json.loads(outputs[2]))
    assert run("check", "--unital", "t.json")[0] == 0


def test_outputs_are_deterministic(work, capsys, rng):
    write("r.json", channel_to_json(random_channel(3, 3, rng)))
    outs = {run("transpose", "r.json", capsys=capsys)[1] for _ in range(3)}
    assert len(outs) == 1


# --- checks -----------------------------------------------------------------


def test_check_depolarizing_passes(work, capsys):
    for rep in ("rep_spin_half.json",):
        code, out = run("check", "--cp", "--unital", "--covariant", rep, rep, "depolarizing_kraus.json", capsys=capsys)
        assert code == 0
        rpt = json.loads(out)
        assert all(v["pass"] for v in rpt.values()) and set(rpt) == {"cp", "unital", "covariant"}


def test_phase_family_build_then_check(work, capsys):
    assert run("phase-family", "build", "tau_rotation.json", "pf.json")[0] == 0
    code, out = run("check", "--covariant", "rep_phase3.json", "rep_phase3.json", "pf.json", capsys=capsys)
    assert code == 0
    assert json.loads(out)["covariant"]["elements_tested"] == 5


def test_phase_family_extract(work, capsys):
    code, out = run("phase-family", "extract", "--rho0", "rho0_diag.json", "amp_damp_kraus.json", capsys=capsys)
    assert code == 0
    taus = {(e["l"], e["j"], e["m"]): complex(e["re"], e["im"]) for e in json.loads(out)}
    assert abs(taus[(-1, 0, 1)] - 0.6) <= 1e-12 and abs(taus[(0, 0, 1)] - 0.8) <= 1e-12


def test_check_broken_normalisation_fails(work, capsys):
    obj = channel_to_json(depolarizing(0.25))
    obj["kraus"][0]["data"][0][0] *= 1.5
    write("broken.json", obj)
    code, out = run("check", "--unital", "broken.json", capsys=capsys)
    assert code == 1
    rpt = json.loads(out)
    assert rpt["unital"]["pass"] is False and rpt["unital"]["residual"] > 0.1


def test_check_modular(work, capsys, rng):
    write("id2.json", channel_to_json(identity_channel(2)))
    rho = make_reference(np.diag([0.8, 0.2]))
    write("rho.json", matrix_to_json(rho.matrix))
    write("h.json", matrix_to_json(-rho.log))
    code, out = run("check", "--rho0", "rho.json", "--modular", "h.json", "id2.json", capsys=capsys)
    assert code == 0 and json.loads(out)["modular"]["residual"] <= 1e-10
    write("rc.json", channel_to_json(random_channel(2, 2, rng)))
    assert run("check", "--rho0", "rho.json", "--modular", "h.json", "rc.json", capsys=capsys)[0] == 1


def test_check_choi_input(work, capsys):
    code, out = run("check", "amp_damp_choi.json", capsys=capsys)
    assert code == 0
    bad = json.loads((work / "identity_choi.json").read_text())
    bad["choi"]["data"][0][0] = -0.5
    write("bad_choi.json", bad)
    code, out = run("check", "--cp", "bad_choi.json", capsys=capsys)
    assert code == 1 and json.loads(out)["cp"]["pass"] is False


def test_tolerance_override(work, capsys, monkeypatch):
    obj = channel_to_json(depolarizing(0.25))
    obj["kraus"][0]["data"][0][0] += 1e-7
    write("near.json", obj)
    assert run("check", "--unital", "near.json", capsys=capsys)[0] == 1
    assert run("check", "--unital", "--tol", "1e-6", "near.json", capsys=capsys)[0] == 0
    monkeypatch.setenv("CJKIT_TOL_OVERRIDE", "100")
    assert run("check", "--unital", "near.json", capsys=capsys)[0] == 0


# --- twirl and transpose --------------------------------------------------------


def test_twirl_of_covariant_is_byte_identical(work, capsys):
    code, out = run("twirl", "depolarizing_kraus.json", "rep_spin_half.json", "rep_spin_half.json", capsys=capsys)
    assert code == 0
    assert out == (work / "depolarizing_kraus.json").read_text()


def test_twirl_output_is_covariant(work, capsys):
    assert run("twirl", "amp_damp_kraus.json", "rep_spin_half.json", "rep_spin_half.json", "tw.json")[0] == 0
    code, _ = run("check", "--covariant", "rep_spin_half.json", "rep_spin_half.json", "tw.json", capsys=capsys)
    assert code == 0
    assert run("convert", "--from", "kraus", "--to", "choi", "amp_damp_kraus.json", "adc.json")[0] == 0
    code, out = run("twirl", "adc.json", "rep_spin_half.json", "rep_spin_half.json", capsys=capsys)
    assert code == 0 and "choi" in json.loads(out)


def test_transpose_identity(work, capsys):
    code, out = run("transpose", "--rho0", "rho0_diag.json", "identity_kraus.json", capsys=capsys)
    assert code == 0
    c = channel_from_json(json.loads(out))
    for b in (np.eye(2), np.array([[0, 1], [0, 0]]), np.diag([1, -1])):
        assert fro(apply_heisenberg(c, b) - b) <= 1e-12


# --- exit-code matrix -------------------------------------------------------


def test_exit_codes(work, capsys):
    (work / "garbage.json").write_text("{not json")
    write("nonunital.json", channel_to_json(Channel.from_kraus([0.5 * np.eye(2)])))
    write("singular_rho.json", matrix_to_json(np.diag([1.0, 0.0])))
    write("short.json", {"rows": 2, "cols": 2, "data": [[1, 0]]})
    cases = [
        (["info", "identity_kraus.json"], 0),
        (["check", "nonunital.json"], 1),
        (["info", "garbage.json"], 2),
        (["info", "no_such_file.json"], 2),
        (["info", "short.json"], 2),
        (["convert", "--from", "choi", "--to", "kraus", "identity_kraus.json"], 2),
        (["convert", "--from", "kraus", "--to", "choi", "nonunital.json"], 3),
        (["convert", "--from", "kraus", "--to", "choi", "--rho0", "singular_rho.json", "identity_kraus.json"], 3),
        (["transpose", "nonunital.json"], 3),
        (["phase-family", "extract", "amp_damp_kraus.json", "--rho0", "rho0_diag.json"], 0),
        (["phase-family", "extract", "depolarizing_kraus.json"], 0),
        (["twirl", "identity_kraus.json", "rep_spin_half.json", "rep_phase3.json"], 3),
    ]
    for argv, expected in cases:
        assert run(*argv, capsys=capsys)[0] == expected, argv
    capsys.readouterr()


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["convert", "--from", "xml", "--to", "choi", "a.json"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_stderr_names_invariant(work, capsys):
    write("nonunital.json", channel_to_json(Channel.from_kraus([0.5 * np.eye(2)])))
    run("convert", "--from", "kraus", "--to", "choi", "nonunital.json")
    assert "margin-violation" in capsys.readouterr().err


def test_module_entry_point(work):
    proc = subprocess.run(
        [sys.executable, "-m", "cjkit.cli", "info", "identity_kraus.json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["kind"] == "channel"
    proc = subprocess.run([sys.executable, "-m", "cjkit.cli", "info", "missing.json"], capture_output=True, text=True)
    assert proc.returncode == 2
