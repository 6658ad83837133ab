import io
import json

import pytest

from rileyslice import __version__
from rileyslice.cli import ConfigError, main, to_complex, to_seq, validate_config


def run(args):
    out = io.StringIO()
    code = main(args, stdout=out)
    return code, out.getvalue()


def test_poly_output():
    code, text = run(["poly", "--seq", "[1,1]"])
    assert code == 0
    assert json.loads(text)["coeffs"] == ["0", "1", "-2", "1"]


def test_poly_from_word_text():
    code, text = run(["poly", "--word", "b a1 b a-1 b"])
    assert code == 0 and json.loads(text)["coeffs"] == ["0", "1", "2", "1"]


@pytest.mark.parametrize(
    "args",
    [
        ["poly", "--seq", "[1,0,1]"],
        ["poly", "--seq", "[1,"],
        ["poly"],
        ["cycles", "--n", "0"],
        ["julia", "--window", "0,0,0,1"],
        ["witness", "--z0", "0"],
        ["nonesuch"],
        ["poly", "--bogus", "1"],
    ],
)
def test_usage_errors_exit_2(args):
    assert run(args)[0] == 2


def test_table1_reports_mismatch():
    code, text = run(["table1"])
    obj = json.loads(text)
    assert obj["total"] == 8
    assert code == (0 if obj["matched"] == 8 else 1)


def test_star_and_compose():
    code, text = run(["star", "--s", "[1]", "--t", "[1]"])
    assert code == 0 and json.loads(text)["seq"] == [1, 1, -1]
    code, text = run(["compose", "--p", "[1,1]", "--q", "[2]"])
    assert code == 0 and json.loads(text)["star_matches"] is True


def test_roots_and_preimages():
    code, text = run(["roots", "--coeffs", "[-1,0,1]"])
    assert code == 0
    assert sorted(r[0] for r in json.loads(text)["roots"]) == pytest.approx([-1, 1])
    code, text = run(["preimages", "--seq", "[1,1]", "--target", "2"])
    assert code == 0 and len(json.loads(text)["preimages"]) == 3


def test_cycles_and_orbit():
    code, text = run(["cycles", "--seq", "[1,1]", "--n", "2", "--exact", "true"])
    assert code == 0 and all(c["period"] == 2 for c in json.loads(text))
    code, text = run(["orbit", "--z0", "1j", "--n", "3"])
    assert code == 0 and json.loads(text)["period"] == 1


def test_certificates():
    assert run(["witness"])[0] == 0
    assert run(["witness", "--z0", "figure-eight"])[0] == 0
    code, text = run(["nonfree", "--z", "2"])
    assert code == 0 and json.loads(text)["certificate"]["word"] == [1, 1]
    code, text = run(["nielsen", "--N", "1"])
    assert code == 0 and json.loads(text)["achieving"] > 0
    assert run(["screen", "--z", "0.5"])[0] == 0
    assert run(["audit", "--limit", "40"])[0] == 0
    code, text = run(["landmarks"])
    assert any(lm["name"] == "figure-eight" for lm in json.loads(text))


def test_config_precedence(tmp_path, monkeypatch):
    monkeypatch.delenv("RILEYSLICE_THREADS", raising=False)
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 3, "seq": [1, 2]}))
    code, _ = run(["cycles", "--config", str(cfg), "--n", "1", "--out", str(tmp_path / "r")])
    assert code == 0
    meta = json.loads((tmp_path / "r.json.meta.json").read_text())
    assert meta["version"] == __version__
    params, sources = meta["config"]["params"], meta["config"]["sources"]
    assert params["n"] == 1 and sources["n"] == "flag"
    assert params["seq"] == [1, 2] and sources["seq"] == "file"
    assert params["exact"] is False and sources["exact"] == "default"
    assert sources["threads"] == "default"


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 2, "colour": "red"}))
    assert run(["cycles", "--config", str(cfg)])[0] == 2
    assert run(["cycles", "--config", str(tmp_path / "missing.json")])[0] == 2


def test_threads_from_env(monkeypatch):
    monkeypatch.setenv("RILEYSLICE_THREADS", "3")
    cfg = validate_config("julia", {})
    assert cfg["threads"] == 3 and cfg.sources["threads"] == "env"
    cfg = validate_config("julia", {"threads": "2"})
    assert cfg["threads"] == 2


def test_julia_and_cloud_files_deterministic(tmp_path):
    for name in ("a", "b"):
        assert run(["julia", "--res", "40", "--max-iter", "60", "--out", str(tmp_path / f"j{name}")])[0] == 0
        assert run(["cloud", "--samples", "300", "--seed", "5", "--out", str(tmp_path / f"c{name}")])[0] == 0
    for stem, ext in (("j", ".pgm"), ("c", ".csv")):
        a, b = tmp_path / f"{stem}a{ext}", tmp_path / f"{stem}b{ext}"
        assert a.read_bytes() == b.read_bytes()
        meta = json.loads((tmp_path / f"{stem}a{ext}.meta.json").read_text())
        assert meta["artifact"] == "rileyslice"
    pgm = (tmp_path / "ja.pgm").read_bytes()
    assert pgm.startswith(b"P5\n40 40\n255\n")
    meta = json.loads((tmp_path / "ja.pgm.meta.json").read_text())
    assert meta["window"] == [-1, 3, -2, 2] and meta["max_iter"] == 60
    lines = (tmp_path / "ca.csv").read_text().splitlines()
    assert lines[0] == "re,im" and len(lines) == 301


def test_value_parsers():
    assert to_seq("[2,-1]") == (2, -1)
    assert to_seq([3]) == (3,)
    assert to_complex("1+2i") == 1 + 2j
    assert to_complex("0.5,-1") == 0.5 - 1j
    assert to_complex([1, 1]) == 1 + 1j
    assert to_complex("whitehead") == 1 + 1j
    with pytest.raises(ConfigError):
        to_seq("[1, 0]")
    with pytest.raises(ConfigError):
        to_complex("abc")
