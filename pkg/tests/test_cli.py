import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from excessnoise import cli
from excessnoise.report import convert_entropic

SWEEP = ["sweep", "--eta", "0.5", "--nb1", "0.1", "--nb2", "0.3", "--ns", "10,100,1000,10000"]


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_sweep_csv_has_header_rows_and_slopes(tmp_path):
    out = tmp_path / "sweep.csv"
    assert cli.main(SWEEP + ["--out", str(out)]) == 0
    rows = read_csv(out)
    header = rows[0]
    assert header[:3] == ["n_s", "d_gauss", "d_limit"]
    assert len(rows) == 1 + 4 + 1
    assert rows[-1][0] == "slope"
    for col in ("gap_d", "gap_v", "gap_f", "gap_qfi"):
        slope = float(rows[-1][header.index(col)])
        assert abs(slope + 1) < 0.15
    # full double precision is written
    value = rows[1][header.index("d_gauss")]
    assert len(value.replace(".", "").replace("-", "").split("e")[0].lstrip("0")) >= 16


def test_sweep_is_byte_identical_on_rerun(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cli.main(SWEEP + ["--out", str(a)])
    cli.main(SWEEP + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_single_ns_omits_slope(tmp_path, caplog):
    out = tmp_path / "one.csv"
    with caplog.at_level("WARNING"):
        assert cli.main(["sweep", "--eta", "0.5", "--nb1", "0.1", "--nb2", "0.3", "--ns", "100", "--out", str(out)]) == 0
    assert "slope" in caplog.text
    rows = read_csv(out)
    assert len(rows) == 2


def test_config_errors_exit_2_without_output(tmp_path):
    out = tmp_path / "never.csv"
    bad = [
        ["sweep", "--eta", "1.5", "--nb1", "0.1", "--nb2", "0.3"],
        ["sweep", "--eta", "0.5", "--nb1", "0.1", "--nb2", "0.3", "--ns", "100,10"],
        ["sweep", "--eta", "0.5", "--nb1", "0.1", "--nb2", "0.1"],
        ["strategy", "--gain", "0.5", "--nb1", "0.1", "--nb2", "0.3"],
        ["oracle-check", "--eta", "0.5", "--nb1", "0.1", "--nb2", "0.3", "--ns", "0.5"],
    ]
    for argv in bad:
        assert cli.main(argv + ["--out", str(out)]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["sweep", "--eta", "0.5", "--gain", "2", "--nb1", "0.1", "--nb2", "0.3", "--out", str(out)])
    assert exc.value.code == 2
    assert not out.exists()


def test_oracle_check_pass_and_breach(tmp_path):
    base = ["oracle-check", "--eta", "0.6", "--nb1", "0.1", "--nb2", "0.3", "--ns", "0.5"]
    good = tmp_path / "good.json"
    assert cli.main(base + ["--nmax", "30", "--out", str(good)]) == 0
    doc = json.loads(good.read_text())
    assert doc["passed"] and doc["schema_version"] == cli.SCHEMA_VERSION
    # a very coarse cutoff stays within the tail budget but misses the tolerance
    assert cli.main(base + ["--nmax", "6", "--tail-tol", "1e-3", "--out", str(tmp_path / "bad.json")]) == 1


def test_strategy_report(tmp_path):
    out = tmp_path / "s.json"
    argv = ["strategy", "--eta", "0.5", "--nb1", "1", "--nb2", "2", "--ns", "100", "--m", "100", "--trials", "2000"]
    assert cli.main(argv + ["--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    s = doc["strategy"]
    assert s["dh_strategy"] <= s["dh_environment"]
    assert np.isclose(s["second_order"], 5.086317109403339)
    assert doc["monte_carlo"]["trials"] == 2000


def test_log_base_round_trip(tmp_path):
    nats, bits = tmp_path / "n.json", tmp_path / "b.json"
    argv = ["divergences", "--gain", "2", "--nb1", "1", "--nb2", "2", "--ns", "100", "--alpha", "0.5,2"]
    cli.main(argv + ["--out", str(nats)])
    cli.main(argv + ["--log-base", "bits", "--out", str(bits)])
    dn, db = json.loads(nats.read_text()), json.loads(bits.read_text())
    assert np.isclose(convert_entropic(db["gaussian"]["d"], "bits", "nats"), dn["gaussian"]["d"], rtol=1e-12)
    assert np.isclose(convert_entropic(db["gaussian"]["v"], "bits", "nats", 2), dn["gaussian"]["v"], rtol=1e-12)
    assert db["gaussian"]["f"] == dn["gaussian"]["f"]
    assert np.isclose(convert_entropic(db["renyi_limit"]["2.0"], "bits", "nats"), dn["renyi_limit"]["2.0"], rtol=1e-12)


def test_qfi_command(capsys):
    assert cli.main(["qfi", "--eta", "0.5", "--nb1", "1", "--ns", "10000", "--m", "10"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert abs(doc["qfi"]["extrapolated"] - 0.5) < 0.005
    assert np.isclose(doc["cramer_rao_floor"], 0.2)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "excessnoise", "divergences", "--eta", "0.5", "--nb1", "0.1", "--nb2", "0.3", "--format", "csv"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0].startswith("schema_version")
