import json
import subprocess
import sys
from pathlib import Path

from gepnerstab.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run_cli(*argv):
    proc = subprocess.run(
        [sys.executable, "-m", "gepnerstab.cli", *argv],
        capture_output=True,
        text=True,
    )
    return proc


def test_table1_golden_bytes():
    proc = run_cli("--json", "table1")
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "table1.json").read_text()


def test_gepner_check_golden_bytes():
    proc = run_cli("--json", "gepner-check", "--type", "1,1:4")
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "gepner_check_114.json").read_text()


def test_table1_has_12_rows():
    proc = run_cli("--json", "table1")
    data = json.loads(proc.stdout)
    assert len(data["results"]) == 12


def test_classify_range():
    proc = run_cli("--json", "classify", "--n", "2..2", "--dmax", "6")
    data = json.loads(proc.stdout)
    assert len(data["results"]) == 5


def test_gepner_check_message():
    proc = run_cli("gepner-check", "--type", "1,1:4")
    assert "Z o tau = zeta * Z: OK (6 basis vectors)" in proc.stdout


def test_charge_values():
    proc = run_cli("--json", "charge", "--type", "1,1,1,1:4", "--class", "1,0,0")
    data = json.loads(proc.stdout)
    assert data["results"]["z_normalized"] == {"d": 4, "coeffs": ["-1", "1"]}
    assert data["results"]["mukai"] == ["1", "2", "3/2"]


def test_zg_roundtrip_exact_values():
    proc = run_cli("--json", "zg", "--type", "1,1:4", "--class", "0,1,1,0,0,0")
    data = json.loads(proc.stdout)
    from gepnerstab.exactmath import CycloNum, cyclo

    z = CycloNum.from_json(data["results"]["z_normalized"])
    assert z == -cyclo(4, 1)


def test_stability_command():
    proc = run_cli("stability", "--type", "1,1:3", "--object", "C1m1", "--primes", "5,7")
    assert proc.returncode == 0
    assert "stable (verified over F_5" in proc.stdout


def test_stability_point_syntax():
    proc = run_cli("stability", "--type", "1,1:4", "--object", "tauPsiOx(3)", "--primes", "5")
    assert proc.returncode == 0
    assert "stable" in proc.stdout


def test_phases_command():
    proc = run_cli("phases", "--type", "3,1:6")
    assert proc.returncode == 0
    assert "tauPsiOx" in proc.stdout
    proc2 = run_cli("phases", "--type", "1:4")
    assert "Q[0,1]" in proc2.stdout


def test_ext_command():
    proc = run_cli("--json", "ext", "--type", "1,1:4", "--from", "C(1)", "--to", "C(0)")
    data = json.loads(proc.stdout)
    assert data["results"]["1"] == 2


def test_hn_command():
    proc = run_cli("hn", "--type", "1,1:3", "--rep", str(GOLDEN / "sample_rep_113.json"))
    assert proc.returncode == 0
    assert "factor (1, 1, 0, 0)" in proc.stdout
    assert "factor (0, 0, 1, 0)" in proc.stdout


def test_hn_command_with_relations_and_embedded_type(tmp_path):
    # a representation of the two-step quiver, type carried by the file
    import random

    from gepnerstab.gfield import field_for
    from gepnerstab.mfcore import WeightedType
    from gepnerstab.quiverrep import heart_quiver, random_rep, rep_to_json

    q = heart_quiver(WeightedType((1, 1), 4))
    rep = random_rep(q, 5, random.Random(2), max_dim=2, inner_budget=3, total_budget=8)
    path = tmp_path / "rep.json"
    path.write_text(json.dumps(rep_to_json(rep)))
    proc = run_cli("hn", "--rep", str(path))
    assert proc.returncode == 0, proc.stderr
    assert "HN filtration over F_25" in proc.stdout


def test_stability_c1m1_on_two_step_type():
    proc = run_cli("stability", "--type", "1,1:4", "--object", "C1m1", "--primes", "5,7")
    assert proc.returncode == 0
    assert "stable" in proc.stdout


def test_usage_error_exit_code():
    proc = run_cli("zg", "--type", "9,9:7", "--class", "1,0")
    assert proc.returncode == 2
    proc2 = run_cli("charge", "--type", "1,1:4", "--class", "1,0")
    assert proc2.returncode == 2


def test_main_callable_directly(capsys):
    code = main(["table1"])
    assert code == 0
    out = capsys.readouterr().out
    assert "K3 surface" in out
