import csv
import io
import json
import math
import subprocess
import sys

import pytest

from tubebeta.cli import main
from tubebeta.config import parse_config
from tubebeta.errors import ConfigError
from tubebeta.report import COLUMNS, payload_json

ANCHOR = """
[run]
seed = 7
budget = 200000
partitions = 4

[set anchor]
n = 1
lambda1_re = 2
lambda2_re = 2
sigma1_re = 3
sigma2_re = 3
tau1_re = 2
tau2_re = 2
variant = 0

[set skew]
n = 2
lambda1_re = 3
lambda1_im = 0.3
lambda2_re = 3.5
sigma1_re = 4
sigma2_re = 4
sigma2_im = -0.4
tau1_re = 3
tau2_re = 3.5
"""

BASE = ["--n", "1", "--lambda1", "2", "--lambda2", "2", "--sigma1", "3", "--sigma2", "3", "--tau1", "2", "--tau2", "2"]


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


@pytest.fixture
def anchor_cfg(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(ANCHOR)
    return path


# ------------------------------------------------------------------------- rhs


def test_rhs_variant_zero():
    code, text = run(["rhs", *BASE, "--variant", "0", "--format", "json"])
    assert code == 0
    doc = json.loads(text)
    assert doc["product"][0] == pytest.approx(math.pi**2 / 64, rel=1e-14)
    assert doc["params"]["sigma1"] == [3.0, 0.0]


def test_rhs_variant_plus_n():
    code, text = run(["rhs", *BASE, "--variant", "+n", "--format", "json"])
    assert code == 0
    assert json.loads(text)["product"][0] == pytest.approx(math.pi**2 / 32, rel=1e-14)


def test_rhs_text_echoes_inputs():
    code, text = run(["rhs", *BASE[:-2], "--tau2", "2+0.5j"])
    assert code == 0
    assert "tau2     = 2+0.5j" in text
    assert "product" in text


def test_rhs_pole_exits_3(capsys):
    argv = ["rhs", "--n", "2", "--lambda1", "3", "--lambda2", "2", "--sigma1", "4", "--sigma2", "4", "--tau1", "3", "--tau2", "3"]
    code, _ = run(argv)
    assert code == 3
    assert "Gamma(lambda2-n)" in capsys.readouterr().err


def test_usage_error_exits_4():
    with pytest.raises(SystemExit) as info:
        main(["rhs", "--n", "1"])
    assert info.value.code == 4
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 4


# ---------------------------------------------------------------------- verify


def test_verify_json_and_csv_share_payload(anchor_cfg):
    code_j, text_j = run(["verify", str(anchor_cfg), "--format", "json"])
    code_c, text_c = run(["verify", str(anchor_cfg), "--format", "csv"])
    assert code_j == code_c == 0
    rows_j = json.loads(text_j)["payload"]["rows"]
    rows_c = list(csv.DictReader(io.StringIO(text_c)))
    assert list(rows_c[0]) == list(COLUMNS)
    assert len(rows_j) == len(rows_c) == 2
    for rj, rc in zip(rows_j, rows_c):
        for key, val in rj.items():
            if isinstance(val, float):
                assert float(rc[key]) == val, key
            else:
                assert rc[key] == str(val), key
    assert rows_j[0]["matched_variant"] == "0"
    assert rows_j[0]["status"] == "verified"
    assert rows_j[0]["z_zero"] <= 3


def test_verify_json_payload_is_byte_identical(anchor_cfg):
    _, a = run(["verify", str(anchor_cfg)])
    _, b = run(["verify", str(anchor_cfg)])
    assert a.split('"timing"')[0] == b.split('"timing"')[0]
    assert payload_json(a) == payload_json(b)


def test_verify_seed_override_changes_payload(anchor_cfg):
    _, a = run(["verify", str(anchor_cfg), "--budget", "20000"])
    _, b = run(["verify", str(anchor_cfg), "--budget", "20000", "--seed", "8"])
    assert payload_json(a) != payload_json(b)


def test_verify_worker_env_var_does_not_change_payload(anchor_cfg, monkeypatch):
    _, a = run(["verify", str(anchor_cfg), "--budget", "40000"])
    monkeypatch.setenv("TUBEBETA_WORKERS", "2")
    _, b = run(["verify", str(anchor_cfg), "--budget", "40000"])
    assert payload_json(a) == payload_json(b)


def test_verify_writes_output_file(anchor_cfg, tmp_path):
    target = tmp_path / "out.csv"
    code, text = run(["verify", str(anchor_cfg), "--format", "csv", "--output", str(target), "--budget", "20000"])
    assert code == 0 and text == ""
    assert target.read_text().splitlines()[0].startswith("name,n,lambda1_re")


def test_verify_expected_reject(tmp_path):
    path = tmp_path / "rej.ini"
    path.write_text(
        "[set bad]\nn = 2\nlambda1_re = 3\nlambda2_re = 2\nsigma1_re = 4\n"
        "sigma2_re = 4\ntau1_re = 3\ntau2_re = 3\nexpect = reject\n"
    )
    code, text = run(["verify", str(path)])
    assert code == 0
    assert json.loads(text)["payload"]["rows"][0]["status"] == "rejected"
    path.write_text(path.read_text().replace("expect = reject", "expect = accept"))
    code, text = run(["verify", str(path)])
    assert code == 3
    assert json.loads(text)["payload"]["rows"][0]["status"] == "invalid"


def test_verify_wrong_expected_variant_is_a_mismatch(tmp_path):
    path = tmp_path / "wrong.ini"
    path.write_text(ANCHOR.replace("variant = 0", "variant = +n").split("[set skew]")[0])
    code, text = run(["verify", str(path)])
    assert code == 2
    assert json.loads(text)["payload"]["rows"][0]["status"] == "mismatch"


def test_verify_empty_set_list_is_usage_error(tmp_path, capsys):
    path = tmp_path / "empty.ini"
    path.write_text("[run]\nseed = 1\n")
    code, _ = run(["verify", str(path)])
    assert code == 4
    assert "no parameter sets" in capsys.readouterr().err


def test_verify_missing_file(tmp_path):
    code, _ = run(["verify", str(tmp_path / "absent.ini")])
    assert code == 4


# ---------------------------------------------------------------------- config


@pytest.mark.parametrize(
    "text, line, field",
    [
        ("[run]\nseed = x\n", 2, "run.seed"),
        ("[run]\nspeed = 1\n", 2, "run.speed"),
        ("[set a]\nn = 1\nlambda1_re = 2\nlambda2_re = two\n", 4, "set a.lambda2_re"),
        ("[set a]\nlambda1_re = 2\n", 1, "set a.n"),
        ("\n[set a]\nn = 1\nlambda1_re = 2\nlambda2_re = 2\nsigma1_re = 3\nsigma2_re = 3\ntau1_re = 2\ntau2_re = 2\nvariant = 2n\n", 10, "set a.variant"),
        ("[other]\nn = 1\n", 1, None),
    ],
)
def test_config_errors_carry_line_and_field(text, line, field):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.line == line
    assert info.value.field == field
    assert f"line {line}" in str(info.value)


def test_config_syntax_error_has_line():
    with pytest.raises(ConfigError) as info:
        parse_config("[run]\nseed = 1\nthis is not ini\n")
    assert info.value.line == 3


def test_config_parses_complex_pairs():
    cfg = parse_config(ANCHOR)
    assert cfg.seed == 7 and cfg.budget == 200000
    skew = cfg.sets[1]
    assert skew.params.lambda1 == 3 + 0.3j
    assert skew.params.sigma2 == 4 - 0.4j
    assert skew.variant is None


def test_config_error_in_cli_exits_4(tmp_path, capsys):
    path = tmp_path / "bad.ini"
    path.write_text("[run]\nbudget = lots\n")
    code, _ = run(["verify", str(path)])
    assert code == 4
    assert "line 2" in capsys.readouterr().err


# ------------------------------------------------------------ other commands


def test_discrepancy_verdict():
    code, text = run(["discrepancy", "--n-list", "1,2,3"])
    assert code == 0
    assert "verdict: offset 0" in text
    assert text.count("MATCH") == 3


def test_steps_with_negative_control():
    argv = ["steps", "--n", "3", "--lambda1", "4", "--lambda2", "4", "--sigma1", "5", "--sigma2", "5", "--tau1", "4", "--tau2", "4", "--negative-control"]
    code, text = run(argv)
    assert code == 0
    assert text.count("PASS") == 3
    assert "(expected failure)" in text


def test_aux_command():
    code, text = run(["aux", "--alpha", "2", "--beta", "3", "--gamma", "2"])
    assert code == 0
    assert "PASS" in text


def test_aux_divergent_exits_3():
    code, _ = run(["aux", "--alpha", "1", "--beta", "1", "--gamma", "1"])
    assert code == 3


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tubebeta", "rhs", *BASE, "--variant=-n", "--format", "json"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["product"][0] == pytest.approx(math.pi**2 / 128, rel=1e-14)
