import json

import pytest

from telewig.cli import main, parse_gain, parse_range, parse_region, parse_state


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_helpers():
    r = parse_range("-10:-3:0.5")
    assert (r.start, r.stop, r.step) == (-10.0, -3.0, 0.5)
    assert parse_range("-5").values() == [-5.0]
    assert parse_range("1:3").values() == [1.0, 2.0, 3.0]
    assert parse_state("sqfock1:0.3466").t == pytest.approx(0.3466)
    assert parse_state("attenuated:0.6304").eta == pytest.approx(0.6304)
    assert parse_gain("G=1.25").value == pytest.approx(1.25)
    assert parse_gain("optimal").mode == "optimal"
    assert parse_region("disk:0.3").size == pytest.approx(0.3)
    assert parse_region("point").kind == "point"
    import argparse
    bad_cases = [(parse_state, "fock1:1"), (parse_state, "sqfock1"),
                 (parse_gain, "G=x"), (parse_gain, "double"),
                 (parse_region, "disk"), (parse_region, "square:"),
                 (parse_range, "1:2:3:4"), (parse_range, "a:b")]
    for fn, bad in bad_cases:
        with pytest.raises(argparse.ArgumentTypeError):
            fn(bad)


def test_sweep_csv_output(capsys):
    code, out, err = run_cli(capsys, "sweep", "--gain", "optimal",
                             "--vsq-db", "-3")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "V_sq_dB,gain_used,W_origin"
    assert lines[1] == "-3,1.331218126,-0.009102242163"


def test_sweep_json_embeds_config(capsys):
    code, out, err = run_cli(capsys, "sweep", "--vsq-db", "-5:-3:1",
                             "--format", "json", "--seed", "42")
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["command"] == "sweep"
    assert doc["config"]["seed"] == 42
    assert doc["config"]["gain"]["mode"] == "unity"
    assert doc["columns"][0] == "V_sq_dB"
    assert len(doc["rows"]) == 3


def test_conditional_row(capsys):
    code, out, _ = run_cli(capsys, "conditional", "--region", "disk:0.3",
                           "--gain", "optimal", "--vsq-db", "-5")
    assert code == 0
    row = out.strip().splitlines()[1].split(",")
    assert float(row[2]) == pytest.approx(-0.28416087257197015, abs=1e-9)
    assert float(row[3]) == pytest.approx(0.018672629215626513, abs=1e-9)


def test_threshold_table(capsys):
    code, out, _ = run_cli(capsys, "threshold", "--region", "point",
                           "--noise-db", "1:5:1")
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()[1:]]
    assert [float(r[1]) for r in rows] == pytest.approx(
        [-1.6242, -2.0615, -2.3205, -2.4940, -2.6172], abs=5e-4)


def test_usage_errors_exit_2(capsys):
    code, _, err = run_cli(capsys, "sweep", "--vsq-db", "-3:-10:1")
    assert code == 2 and "empty" in err
    code, _, err = run_cli(capsys, "noisy", "--region", "square:0.3",
                           "--gain", "optimal", "--vsq-db", "-3")
    assert code == 2 and "unity or fixed" in err
    code, _, err = run_cli(capsys, "threshold", "--region", "point")
    assert code == 2 and "noise-db" in err
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--gain", "bogus"])
    assert exc.value.code == 2


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "table.csv"
    code, out, _ = run_cli(capsys, "noisy", "--noise-db", "3",
                           "--vsq-db", "-5:-3:1", "--out", str(target))
    assert code == 0 and out == ""
    lines = target.read_text().strip().splitlines()
    assert lines[0] == "V_sq_dB,W_origin"
    assert len(lines) == 4


def test_verify_passes_and_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["verify", "--seed", "3141", "--out", str(a)]) == 0
    assert main(["verify", "--seed", "3141", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().strip().splitlines()[-1] == "overall,,,True"


def test_verify_perturbed_fails(capsys):
    code, out, _ = run_cli(capsys, "verify", "--perturb")
    assert code == 1
    assert "channel-quadrature" in out and "False" in out
