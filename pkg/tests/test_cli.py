import csv
import json
from fractions import Fraction as Fr

import numpy as np
import pytest

import targets
from cxreflect.cli import (InputError, atlas_from_dict, atlas_to_dict, decompose_report, main,
                           parse_pi, reverify)
from cxreflect.atlas import chambers
from cxreflect.decomposer import elliptic_from_angles
from cxreflect.isometry import Parameter, special_elliptic


def _write(tmp_path, M, name="m.json"):
    p = tmp_path / name
    M = np.asarray(M, dtype=complex)
    p.write_text(json.dumps({"re": M.real.tolist(), "im": M.imag.tolist()}))
    return str(p)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_parse_pi():
    assert parse_pi("1/3") == Fr(1, 3)
    assert parse_pi("2") == 2
    for bad in ("0.3", "1e-2", "", "pi"):
        with pytest.raises(InputError):
            parse_pi(bad)


def test_classify(tmp_path, capsys):
    code, out = _run(capsys, ["classify", _write(tmp_path, special_elliptic(1j, (0, 0, 1)).m)])
    assert code == 0
    assert out["kind"] == "special-elliptic-neg-center"


def test_classify_scaled_input(tmp_path, capsys):
    M = 3.0 * np.exp(0.4j) * targets.loxodromic(np.random.default_rng(1)).m
    code, out = _run(capsys, ["classify", _write(tmp_path, M)])
    assert code == 0 and out["kind"] == "loxodromic"


def test_bad_input(tmp_path, capsys):
    assert main(["classify", _write(tmp_path, np.diag([1, 2, 3]))]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["classify", str(bad)]) == 2
    assert main(["classify", str(tmp_path / "missing.json")]) == 2
    assert main(["decompose", _write(tmp_path, np.eye(3)), "--a", "0.3"]) == 2


def test_decompose_loxodromic(tmp_path, capsys):
    F = targets.loxodromic(np.random.default_rng(3))
    code, out = _run(capsys, ["decompose", _write(tmp_path, F.m), "--a", "1/7"])
    assert code == 0
    assert out["n"] in (2, 3)
    assert out["reverified_residual"] <= 1e-8


def test_decompose_empty_chamber(tmp_path, capsys):
    path = _write(tmp_path, elliptic_from_angles(0.7, 0.6).m)
    code, out = _run(capsys, ["decompose", path, "--a", "1/3", "--max-length", "3"])
    assert code == 4 and out["n"] is None
    code, out = _run(capsys, ["decompose", path, "--a", "1/3"])
    assert code == 0 and out["n"] == 4


def test_decompose_wall_point(tmp_path, capsys):
    # (0.55, 0.45) sits on the wall x + y = 1 bounding an empty chamber
    path = _write(tmp_path, elliptic_from_angles(0.55, 0.45).m)
    code, out = _run(capsys, ["decompose", path, "--a", "1/3", "--max-length", "3"])
    assert code == 0 and out["n"] == 3


def test_decompose_open_case(tmp_path, capsys):
    path = _write(tmp_path, targets.two_step(np.random.default_rng(2)).m)
    code, out = _run(capsys, ["decompose", path, "--a", "1/7"])
    assert code == 5
    assert out["n"] == "unknown" and out["upper_bound"] == 4
    code, out = _run(capsys, ["decompose", path, "--a", "1/7", "--max-length", "3"])
    assert code == 5


def test_reverify_independent():
    a = Parameter.from_pi(Fr(1, 5))
    p = np.array([0.2, 0.1j, 1])
    F = special_elliptic(a, p).m
    assert reverify(F, a.value, [p]) < 1e-14
    assert reverify(F, a.value, [np.array([0.3, 0, 1])]) > 1e-3


def test_atlas_outputs(tmp_path, capsys):
    code, out = _run(capsys, ["atlas", "--a", "1/3", "--out", str(tmp_path)])
    assert code == 0
    assert out["counts"] == {"full": 8, "empty": 2, "unknown": 0}
    assert out["files"] == ["atlas.json", "atlas.svg", "walls.csv"]
    data = json.loads((tmp_path / "atlas.json").read_text())
    assert sum(c["status"] == "empty" for c in data["chambers"]) == 2
    rows = list(csv.reader((tmp_path / "walls.csv").open()))
    assert rows[0][:2] == ["seg_id", "line_label"] and len(rows) == 7
    svg = (tmp_path / "atlas.svg").read_text()
    assert svg.startswith("<?xml") and "#cccccc" in svg


def test_atlas_svg_deterministic(tmp_path, capsys):
    main(["atlas", "--a", "5/27", "--out", str(tmp_path / "x")])
    main(["atlas", "--a", "5/27", "--out", str(tmp_path / "y")])
    capsys.readouterr()
    assert (tmp_path / "x" / "atlas.svg").read_bytes() == (tmp_path / "y" / "atlas.svg").read_bytes()


def test_atlas_roundtrip():
    at = chambers(Fr(1, 3))
    d = json.loads(json.dumps(atlas_to_dict(at, Fr(1, 3))))
    back = atlas_from_dict(d)
    assert back["alpha"] == Fr(1, 3)
    assert [c["vertices"] for c in back["chambers"]] == [
        [tuple(Fr(v) for v in p) for p in c.polygon] for c in at.chambers]
    assert [c["status"] for c in back["chambers"]] == [c.status for c in at.chambers]


def test_atlas_exit_codes(tmp_path, capsys):
    assert main(["atlas", "--a", "2/3", "--out", str(tmp_path)]) == 2
    assert main(["atlas", "--a", "4/27", "--out", str(tmp_path)]) == 3
    assert main(["atlas", "--a", "0.3", "--out", str(tmp_path)]) == 2


def test_sweep(tmp_path, capsys):
    code, out = _run(capsys, ["sweep", "--from", "0", "--to", "2/3", "--steps", "72",
                              "--out", str(tmp_path)])
    assert code == 0
    for t in out["transitions"]:
        lo, hi = Fr(*t["between"][0]), Fr(*t["between"][1])
        assert lo <= Fr(*t["nearest_multiple_of_2pi_27"]) <= hi
    lo, hi = (Fr(*v) for v in out["empty_window"])
    assert Fr(4, 27) < lo and hi < Fr(14, 27)
    assert {p.name for p in tmp_path.iterdir()} == {"sweep.json", "sweep.csv", "sweep.svg"}
