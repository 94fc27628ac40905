"""CLI behavior: subcommands, exit codes, formats, determinism."""

import json

import pytest

from catrep.cli import main
from catrep.reports import make_report, to_json

TORSION = """catrep-presentation v1
category oi
group none
field fp:101
horizon 6
gen u deg 1
rel 2: 1*1->2:[2]@u
"""

M1 = """catrep-presentation v1
category oi
group none
field q
horizon 6
gen u deg 1
"""

TORSION0 = """catrep-presentation v1
category fi
group none
field q
horizon 5
gen v deg 0
rel 1: 1*0->1:[]@v
"""


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in [("torsion", TORSION), ("M1", M1), ("torsion0", TORSION0)]:
        p = tmp_path / f"{name}.pres"
        p.write_text(text)
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_info(files, capsys):
    code, out, _ = run(capsys, "info", files["torsion"])
    assert code == 0
    assert "dims=[0, 1, 1, 1, 1, 1, 1]" in out
    assert "valid to degree 6" in out


def test_info_emit_normalized_round_trip(files, capsys, tmp_path):
    code, out, _ = run(capsys, "info", files["torsion"], "--emit-normalized")
    assert code == 0
    p = tmp_path / "normalized.pres"
    p.write_text(out)
    code2, out2, _ = run(capsys, "info", str(p), "--emit-normalized")
    assert code2 == 0 and out2 == out  # normalization is idempotent


def test_hilbert_m1(files, capsys):
    code, out, _ = run(capsys, "hilbert", files["M1"])
    assert code == 0
    assert "['0', '1']" in out and "onset" in out
    assert "degree-le-gd" in out


def test_probe_sd(files, capsys):
    code, out, _ = run(capsys, "probe-sd", files["torsion"])
    assert code == 0
    assert "SDV" in out and "dims=[1, 1, 1, 1, 1]" in out
    assert "DSV" in out and "dims=[0, 0, 0, 0, 0]" in out


def test_decompose_torsion0(files, capsys):
    code, out, _ = run(capsys, "decompose", files["torsion0"])
    assert code == 0
    assert "stabilized_at  1" in out
    assert "V_sin          dims=[1, 0, 0, 0, 0]" in out


def test_decompose_inconclusive_exit_2(files, capsys):
    code, out, _ = run(capsys, "--horizon", "2", "decompose", files["torsion"])
    assert code == 2


def test_hilbert_inconclusive_exit_2(files, capsys):
    code, out, _ = run(capsys, "--horizon", "2", "hilbert", files["torsion"])
    assert code == 2
    assert "inconclusive" in out


def test_negative_horizon_rejected(files, capsys):
    code, _, err = run(capsys, "--horizon", "-1", "info", files["torsion"])
    assert code == 1


def test_shift_and_homology(files, capsys):
    code, out, _ = run(capsys, "shift", files["torsion"])
    assert code == 0 and "key-sequence-exact" in out
    code, out, _ = run(capsys, "homology", files["torsion"], "--depth", "2")
    assert code == 0
    assert "H_1" in out and "reg" in out


def test_verify_exit_codes(files, capsys):
    code, out, _ = run(capsys, "verify", files["torsion"], "--depth", "2", "--smax", "1")
    assert code == 2  # finite-support check inconclusive at this horizon
    assert "SKIPPED" in out  # mu-injective bound skipped with reason


def test_oracle(files, capsys):
    code, out, _ = run(capsys, "oracle", files["torsion"])
    assert code == 0
    assert "[PASS]" in out


def test_json_byte_stable(files, capsys):
    code, out1, _ = run(capsys, "--format", "json", "homology", files["torsion"])
    code2, out2, _ = run(capsys, "--format", "json", "homology", files["torsion"])
    assert code == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["version"] == 1
    assert all("valid_to" in item for item in doc["items"] if item["type"] == "dims")


def test_empty_report_shape():
    assert json.loads(to_json(make_report("", {}, []))) == {"version": 1, "items": []}


def test_parse_error_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.pres"
    bad.write_text("hello\n")
    code, _, err = run(capsys, "info", str(bad))
    assert code == 1
    assert "line 1" in err


def test_flag_overrides_field(files, capsys):
    code, out, _ = run(capsys, "--field", "fp:7", "info", files["M1"])
    assert code == 0 and "dims=[0, 1, 2, 3, 4, 5, 6]" in out


def test_fuzz_deterministic(capsys):
    args = ["--cat", "oi", "--field", "fp:101", "--horizon", "5", "fuzz", "--seed", "3", "--count", "4"]
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert out1 == out2
    assert code1 == code2
    assert code1 in (0, 2)
    assert "seed-3" in out1


def test_fuzz_requires_config(capsys):
    code, _, err = run(capsys, "fuzz", "--seed", "1")
    assert code == 1
