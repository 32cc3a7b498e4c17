import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from bisorenyi import cli
from bisorenyi.channel import bec, bsc
from bisorenyi.ordering import calibrate, evaluate_lorenz, lorenz_curve
from bisorenyi.suite import Check


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    p = calibrate("bsc", 0.3, 0.4)
    return {
        "bsc01": write(tmp_path, "bsc01.json", {"pairs": [[0.9, 0.1]]}),
        "bec": write(tmp_path, "bec.json", {"matrix": [[0.7, 0.3, 0.0], [0.0, 0.3, 0.7]]}),
        "bad": write(tmp_path, "bad.json", {"pairs": [[0.6, 0.1]]}),
        "bec_m": write(tmp_path, "bec_m.json", bec(calibrate("bec", 0.3, 0.4)).to_dict()),
        "bsc_m": write(tmp_path, "bsc_m.json", {"pairs": [[1 - p, p]]}),
        "dir": tmp_path,
    }


class TestParseChannel:
    def test_examples(self, files):
        assert cli.parse_channel_file(files["bsc01"]).pairs == bsc(0.1).pairs
        assert cli.parse_channel_file(files["bec"]).pairs == bec(0.3).pairs
        with pytest.raises(cli.CliError, match="mass"):
            cli.parse_channel_file(files["bad"])

    def test_missing_file(self, tmp_path):
        with pytest.raises(cli.CliError, match="cannot read"):
            cli.parse_channel_file(tmp_path / "none.json")

    @pytest.mark.parametrize("text", ["not json", "[1, 2]", '{"label": "x"}',
                                      '{"pairs": [[0.9, 0.1]], "matrix": [[1]]}'])
    def test_schema(self, tmp_path, text):
        p = tmp_path / "c.json"
        p.write_text(text)
        with pytest.raises(cli.CliError):
            cli.parse_channel_file(p)


class TestCommands:
    def test_mi(self, files):
        code, out, _ = call("mi", "--channel", files["bsc01"], "--alpha", 2, "--x", 0.5)
        assert code == 0
        rep = json.loads(out)
        assert rep["command"] == "mi"
        assert rep["version"] == "0.1.0"
        assert rep["results"]["variant"] == "sibson"
        assert rep["results"]["value_nats"] == pytest.approx(0.4947, abs=1e-4)
        assert rep["results"]["regime"] == "forward"
        assert rep["checks"] == []

    def test_mi_arimoto_bits_and_many_alphas(self, files):
        code, out, _ = call("mi", "--channel", files["bsc01"], "--alpha", 2, "--alpha", 0.4,
                            "--x", 0.3, "--variant", "arimoto", "--bits")
        rows = json.loads(out)["results"]
        assert code == 0 and len(rows) == 2
        assert [r["regime"] for r in rows] == ["forward", "reversed"]
        for r in rows:
            assert r["value_bits"] == pytest.approx(r["value_nats"] / np.log(2), rel=1e-11)

    def test_capacity(self, files):
        code, out, _ = call("capacity", "--channel", files["bec"], "--alpha", 2)
        res = json.loads(out)["results"]
        assert code == 0
        assert res["d_c"] == pytest.approx(0.912132034356, abs=1e-12)
        assert res["c_alpha_nats"] == pytest.approx(0.509206130813, abs=1e-12)

    def test_compare_reversed(self, files):
        code, out, _ = call("compare", "--a", files["bec_m"], "--b", files["bsc_m"],
                            "--alpha", 0.4, "--grid", 1001)
        rep = json.loads(out)
        assert code == 0
        assert rep["results"]["verdict"] == "SecondMoreCapable"
        assert rep["results"]["lorenz"]["verdict"] == "SecondMoreCapable"
        assert all(c["passed"] for c in rep["checks"])

    def test_calibrate(self, files):
        code, out, _ = call("calibrate", "--family", "bsc", "--channel", files["bec"], "--alpha", 2)
        assert code == 0
        assert json.loads(out)["results"]["parameter"] == pytest.approx(0.092578, abs=1e-6)
        code, out, _ = call("calibrate", "--family", "bec", "--target", 0.509206130813, "--alpha", 2)
        assert json.loads(out)["results"]["parameter"] == pytest.approx(0.3, abs=1e-9)

    def test_extremal(self, files):
        code, out, _ = call("extremal", "--channel", files["bec"], "--alpha", 2, "--alpha", 0.4)
        rep = json.loads(out)
        assert code == 0
        assert [c["passed"] for c in rep["checks"]] == [True, True]

    def test_extremal_failure_exit(self, files, monkeypatch):
        real = cli.extremality_report

        def broken(*args, **kw):
            rep = real(*args, **kw)
            return type(rep)(**{**rep.__dict__, "holds": False})

        monkeypatch.setattr(cli, "extremality_report", broken)
        code, out, _ = call("extremal", "--channel", files["bec"], "--alpha", 2)
        assert code == 1
        assert json.loads(out)["checks"][0]["passed"] is False

    def test_verify_quick(self):
        code, out, _ = call("verify", "--suite", "special", "--quick")
        rep = json.loads(out)
        assert code == 0
        assert rep["checks"][0]["name"] == "special_alpha_forms"
        assert set(rep["checks"][0]) >= {"name", "passed", "worst"}

    def test_verify_failure_exit(self, monkeypatch):
        monkeypatch.setattr(cli, "run_suite", lambda *a, **k: [Check("x", False, 1.0)])
        code, out, _ = call("verify")
        assert code == 1
        assert json.loads(out)["results"]["passed"] is False

    def test_verify_all_seed7(self):
        code, out, _ = call("verify", "--suite", "all", "--seed", 7)
        rep = json.loads(out)
        assert code == 0
        assert len(rep["checks"]) == 12
        assert all(c["passed"] for c in rep["checks"])


class TestErrors:
    @pytest.mark.parametrize("argv", [
        [],
        ["mi"],
        ["mi", "--channel", "x.json", "--alpha", "-1"],
        ["mi", "--channel", "x.json", "--x", "1.5"],
        ["calibrate", "--family", "bsc"],
        ["verify", "--suite", "nope"],
        ["lorenz", "--channel", "x.json", "--format", "xml"],
    ])
    def test_usage(self, argv, capsys):
        assert cli.run(argv, io.StringIO(), io.StringIO()) == 2

    def test_missing_and_invalid(self, files):
        code, _, err = call("mi", "--channel", files["dir"] / "none.json")
        assert code == 2 and "cannot read" in err
        code, _, err = call("capacity", "--channel", files["bad"])
        assert code == 2 and "mass" in err

    def test_bad_grid(self, files):
        assert call("compare", "--a", files["bec"], "--b", files["bsc01"], "--grid", 2)[0] == 2

    def test_csv_needs_one_alpha(self, files):
        code, _, err = call("lorenz", "--channel", files["bec"], "--format", "csv",
                            "--alpha", 2, "--alpha", 3)
        assert code == 2


class TestOutput:
    def test_deterministic(self, files):
        a = call("compare", "--a", files["bec"], "--b", files["bsc01"], "--alpha", 2)
        b = call("compare", "--a", files["bec"], "--b", files["bsc01"], "--alpha", 2)
        assert a == b

    def test_twelve_significant_digits(self, files):
        _, out, _ = call("lorenz", "--channel", files["bec"], "--alpha", 0.75)

        def floats(o):
            if isinstance(o, float):
                yield o
            elif isinstance(o, dict):
                for v in o.values():
                    yield from floats(v)
            elif isinstance(o, list):
                for v in o:
                    yield from floats(v)

        for f in floats(json.loads(out)):
            assert float(f"{f:.12g}") == f

    @pytest.mark.parametrize("alpha", [0.4, 2.0, 5.0])
    def test_lorenz_csv_round_trip(self, files, alpha):
        code, out, _ = call("lorenz", "--channel", files["bec"], "--format", "csv",
                            "--alpha", alpha, "--dense", 7)
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["t", "F"]
        t, f = np.array(rows[1:], dtype=float).T
        curve = lorenz_curve(bec(0.3), alpha)
        again = np.interp(curve.breakpoints, t, f)
        assert np.max(np.abs(again - evaluate_lorenz(curve, curve.breakpoints))) <= 1e-9

    def test_json_lorenz(self, files):
        code, out, _ = call("lorenz", "--channel", files["bec"], "--alpha", 2)
        res = json.loads(out)["results"]
        assert res["breakpoints"] == pytest.approx([0.0, 0.7, 0.912132034356])
        assert res["F"][-1] == pytest.approx(1.0)


class TestSweep:
    def read(self, path):
        with open(path) as fh:
            rows = list(csv.reader(fh))
        return rows[0], np.array(rows[1:], dtype=float)

    def test_three_rows(self, files):
        out = files["dir"] / "s.csv"
        assert cli.emit_sweep(bsc(0.1), [2.0], 3, out) == 3
        header, data = self.read(out)
        assert header == ["alpha", "x", "sibson_mi", "arimoto_mi"]
        assert data.shape == (3, 4)
        assert data[1, 2] == pytest.approx(0.494696, abs=1e-6)

    def test_symmetry_and_order(self, files):
        out = files["dir"] / "s.csv"
        cli.emit_sweep(bec(0.3), [0.4, 2.0], 21, out)
        _, data = self.read(out)
        assert list(data[:21, 0]) == [0.4] * 21 and list(data[21:, 0]) == [2.0] * 21
        for block in (data[:21], data[21:]):
            assert np.allclose(block[:, 2], block[::-1, 2], atol=1e-11)

    def test_bits(self, files):
        out = files["dir"] / "b.csv"
        cli.emit_sweep(bsc(0.1), [2.0], 3, out, bits=True)
        _, data = self.read(out)
        assert data[1, 2] == pytest.approx(0.494696241836 / np.log(2), rel=1e-11)

    def test_cli_and_unwritable(self, files):
        code, out, _ = call("sweep", "--channel", files["bsc01"], "--alpha", 2, "--grid", 5,
                            "--out", files["dir"] / "c.csv")
        assert code == 0 and json.loads(out)["results"]["rows"] == 5
        code, _, err = call("sweep", "--channel", files["bsc01"], "--out",
                            files["dir"] / "missing" / "c.csv")
        assert code == 2 and "cannot write" in err

    def test_empty_alpha_list(self, files):
        with pytest.raises(cli.CliError):
            cli.emit_sweep(bsc(0.1), [], 3, files["dir"] / "e.csv")


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "bisorenyi.cli", "mi", "--channel", files["bsc01"], "--alpha", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["value_nats"] == pytest.approx(0.494696241836)
    proc = subprocess.run([sys.executable, "-m", "bisorenyi.cli", "mi", "--channel", "nope.json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2
