import csv
import io
import json
import math

import numpy as np
import pytest

import dunkl_up.acceptance as acceptance
from dunkl_up import cli
from dunkl_up.errors import ConfigError
from dunkl_up.extremals import make_extremal, preset

SMALL = {
    "mu_list": [0.0, 1.5],
    "angle_pairs": [[0, "pi/2"], ["pi/4", "3pi/4"]],
    "p_list": [1, 2],
    "functions": ["gaussian", "mixed", {"preset": "form12-shifted", "name": "f12"}],
}


def write_json(tmp_path, obj, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


@pytest.mark.parametrize(
    "text,value",
    [
        ("pi/2", math.pi / 2),
        ("3pi/4", 0.75 * math.pi),
        ("-pi", -math.pi),
        ("2*pi", 2 * math.pi),
        (" 0.5 pi / 3 ", 0.5 * math.pi / 3),
        ("0.3", 0.3),
        (1.7, 1.7),
        (0, 0.0),
    ],
)
def test_parse_angle(text, value):
    assert cli.parse_angle(text) == pytest.approx(value, rel=1e-15)


@pytest.mark.parametrize("bad", ["pie", "pi/", True, "inf", float("nan")])
def test_parse_angle_rejects(bad):
    with pytest.raises(ConfigError):
        cli.parse_angle(bad)


@pytest.mark.parametrize(
    "patch",
    [
        {"p_list": [3]},
        {"mu_list": [-1.0]},
        {"functions": ["nope"]},
        {"functions": [{"battery": "gauss", "preset": "centered"}]},
        {"functions": [{"preset": "form12-shifted", "params": {"zeta": -1}}]},
        {"functions": [{"preset": "form12-shifted", "params": {"bogus": 1}}]},
        {"bounds": ["unknown"]},
        {"extra": 1},
        {"angle_pairs": [["pie", 1]]},
        {"scheme": {"panels": 3}},
    ],
)
def test_bad_configs_exit_1(tmp_path, patch, capsys):
    path = write_json(tmp_path, {**SMALL, **patch})
    assert cli.main(["verify", path]) == 1
    assert "configuration error" in capsys.readouterr().err


def test_invalid_json_and_missing_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert cli.main(["verify", str(p)]) == 1
    assert cli.main(["sweep", str(tmp_path / "missing.json")]) == 1


def test_degenerate_pair_is_row_error(tmp_path):
    cfg = {**SMALL, "angle_pairs": [[0, "pi"], [0.3, 1.7]], "bounds": ["sami", "sharp_fractional"]}
    code, rep = cli.run_verify(cfg, meta=False)
    bad = [r for r in rep["rows"] if r["beta"] == math.pi]
    good = [r for r in rep["rows"] if r["beta"] != math.pi]
    assert bad and all("piZ" in r["error"] for r in bad)
    assert good and all("error" not in r for r in good)
    assert code == 0
    assert rep["summary"]["errors"] == len(bad)


def test_small_verify(tmp_path):
    code, rep = cli.run_verify(SMALL, meta=False)
    assert code == 0
    # per (function, mu): rosler + fei + 2 (sami) + 2*2 (lp) + 2 (sharp) = 10
    assert rep["summary"]["rows"] == 3 * 2 * 10
    assert rep["summary"]["violations"] == 0
    labels = {r["function"] for r in rep["rows"]}
    assert labels == {"gauss", "mixed", "f12"}
    f12 = [r for r in rep["rows"] if r["function"] == "f12" and r["bound"] == "lp_fractional" and r["p"] == 2.0]
    assert all(abs(r["rel_gap"]) < 1e-4 for r in f12)


def test_default_verify_and_determinism(tmp_path, monkeypatch):
    path = write_json(tmp_path, cli.DEFAULT_CONFIG)
    outs = []
    for threads in ("1", "2"):
        monkeypatch.setenv("DUNKL_UP_THREADS", threads)
        out = tmp_path / f"out{threads}.json"
        assert cli.main(["verify", path, "--out", str(out), "--no-meta"]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    rep = json.loads(outs[0])
    assert rep["summary"] == {"rows": 528, "violations": 0, "errors": 0, "consistency_errors": 0}


def test_meta_block(tmp_path, monkeypatch):
    monkeypatch.setenv("DUNKL_UP_THREADS", "1")
    code, rep = cli.run_verify({**SMALL, "functions": ["gauss"], "mu_list": [0.0]})
    assert rep["meta"]["command"] == "verify" and rep["meta"]["threads"] == 1
    text = cli.render(rep, "csv")
    assert text.startswith("# {")


def test_csv_output(tmp_path):
    path = write_json(tmp_path, {**SMALL, "functions": ["poly"], "output": {"format": "csv"}})
    out = tmp_path / "r.csv"
    assert cli.main(["verify", path, "--out", str(out), "--no-meta"]) == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert tuple(rows[0]) == cli.CSV_COLUMNS
    assert len(rows) == 1 + 2 * 10
    lhs = rows[0].index("lhs")
    assert all(float(r[lhs]) > 0 for r in rows[1:])


def test_sweep(tmp_path):
    code, rep = cli.run_sweep({**SMALL, "p_list": [1.1]}, meta=False)
    assert code == 0 and rep["summary"] == {"rows": 6, "errors": 0}
    r = rep["rows"][0]
    assert r["function"] == "gauss" and r["mu"] == 0.0
    assert r["a_term"] == pytest.approx(1.0, rel=1e-12)
    assert "1.1" in r["disp_p"] and "1.25" in r["disp_p"]
    text = cli.render(rep, "csv", "sweep")
    assert text.splitlines()[0].split(",") == list(cli.SWEEP_COLUMNS)


def test_invalid_threads_env(tmp_path, monkeypatch):
    monkeypatch.setenv("DUNKL_UP_THREADS", "many")
    assert cli.main(["verify", write_json(tmp_path, SMALL)]) == 1
    monkeypatch.setenv("DUNKL_UP_THREADS", "-2")
    assert cli.main(["verify", write_json(tmp_path, SMALL)]) == 1


def _read_transform(path):
    lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    assert lines[0] == "w,re,im"
    arr = np.array([[float(v) for v in l.split(",")] for l in lines[1:]])
    return arr[:, 0], arr[:, 1] + 1j * arr[:, 2]


def test_transform_preset_identity_and_parity(tmp_path, scheme):
    _, pf = make_extremal(preset("form12-shifted", 0.5))
    f = pf.eval(scheme.nodes)
    out = tmp_path / "t.csv"
    assert cli.main(["transform", "--mu", "0.5", "--alpha", "0", "--preset", "form12-shifted", "--out", str(out)]) == 0
    w, v = _read_transform(out)
    assert np.array_equal(w, scheme.nodes) and np.array_equal(v, f)
    assert cli.main(["transform", "--mu", "0.5", "--alpha", "pi", "--preset", "form12-shifted", "--out", str(out)]) == 0
    _, v = _read_transform(out)
    assert np.array_equal(v, f[::-1])


def test_transform_gaussian_alias_is_fixed(tmp_path, scheme):
    out = tmp_path / "g.csv"
    assert cli.main(["transform", "--mu", "1.5", "--alpha", "pi/3", "--preset", "gaussian", "--out", str(out)]) == 0
    w, v = _read_transform(out)
    g = np.exp(-w * w / 2) / math.sqrt(math.gamma(2.5))
    assert np.abs(v - g).max() < 1e-11


def test_transform_input_round_trip(tmp_path, scheme):
    x = scheme.nodes
    f = np.exp(-((x - 0.4) ** 2) / 2 + 0.2j * x)
    src = tmp_path / "in.csv"
    src.write_text("x,re,im\n" + "".join(f"{a!r},{b.real!r},{b.imag!r}\n" for a, b in zip(x.tolist(), f.tolist())))
    fwd = tmp_path / "fwd.csv"
    assert cli.main(["transform", "--mu", "0", "--alpha", "0.9", "--input", str(src), "--out", str(fwd)]) == 0
    back = tmp_path / "back.csv"
    assert cli.main(["transform", "--mu", "0", "--alpha", "-0.9", "--input", str(fwd), "--out", str(back)]) == 0
    _, v = _read_transform(back)
    assert np.abs(v - f).max() < 1e-10


def test_transform_input_errors(tmp_path):
    src = tmp_path / "in.csv"
    src.write_text("0,1,0\n1,1,0\n")
    assert cli.main(["transform", "--mu", "0", "--alpha", "1", "--input", str(src), "--out", str(tmp_path / "o")]) == 1
    with pytest.raises(ConfigError):
        cli.run_transform(0.0, 1.0)
    with pytest.raises(ConfigError):
        cli.run_transform(0.0, 1.0, preset_name="nope")


def test_transform_warns_in_header(tmp_path):
    out = tmp_path / "w.csv"
    assert cli.main(["transform", "--mu", "0", "--alpha", "0.01", "--preset", "gauss", "--out", str(out)]) == 0
    assert "chirp under-resolved" in out.read_text().splitlines()[0]


def test_selftest_exit_codes(monkeypatch, capsys):
    ok = acceptance.CriterionResult("A1", "t", True, 0.0, 1.0, "")
    bad = acceptance.CriterionResult("A2", "t", False, 2.0, 1.0, "")
    monkeypatch.setattr(acceptance, "run_acceptance", lambda ids=None: [ok])
    assert cli.main(["selftest"]) == 0
    monkeypatch.setattr(acceptance, "run_acceptance", lambda ids=None: [ok, bad])
    assert cli.main(["selftest"]) == 2
    assert "A2" in capsys.readouterr().out


def test_module_entry_point():
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "dunkl_up", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "verify" in r.stdout
