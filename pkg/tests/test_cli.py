from __future__ import annotations

import json

import pytest

from d4sylow.cli import build_parser, config_from_args, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_roots_tsv(capsys):
    code, out, _ = run(capsys, "roots", "--format", "tsv")
    rows = out.strip().split("\n")
    assert code == 0 and len(rows) == 13
    assert rows[12].split("\t")[:3] == ["12", "1,1,2,1", "5"]


def test_roots_json_deterministic(capsys):
    _, a, _ = run(capsys, "roots")
    _, b, _ = run(capsys, "roots")
    assert a == b and len(json.loads(a)["roots"]) == 12


def test_mul_and_conj(capsys):
    code, out, _ = run(capsys, "mul", "--q", "3", "0,0,1,0,0,0,0,0,0,0,0,0", "1,0,0,0,0,0,0,0,0,0,0,0", "--format", "tsv")
    assert code == 0 and out.strip().split("\t")[:5] == ["1", "0", "1", "0", "2"]
    code, out, _ = run(capsys, "conj", "--q", "3", "0,0,1,0,0,0,0,0,0,0,0,0", "1,0,0,0,0,0,0,0,0,0,0,0", "--format", "tsv")
    assert out.strip().split("\t")[4] == "2"
    code, out, _ = run(capsys, "conj", "--left", "--q", "3", "0,0,1,0,0,0,0,0,0,0,0,0", "1,0,0,0,0,0,0,0,0,0,0,0", "--format", "tsv")
    assert out.strip().split("\t")[4] == "1"


def test_mul_field_codes_q4(capsys):
    # codes, not integers: code 2 is the generator x of GF(4)
    code, out, _ = run(capsys, "mul", "--q", "4", "2,0,0,0,0,0,0,0,0,0,0,0", "2,0,0,0,0,0,0,0,0,0,0,0")
    assert json.loads(out)["result"]["d"][0] == [0, 0]
    code, out, _ = run(capsys, "mul", "--q", "4", "2,0,0,0,0,0,0,0,0,0,0,0", "1,0,0,0,0,0,0,0,0,0,0,0")
    assert json.loads(out)["result"]["d"][0] == [1, 1]


def test_classes(capsys, tmp_path):
    path = tmp_path / "c.json"
    code, out, _ = run(capsys, "classes", "--q", "2", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["count"] == 103
    code, out, _ = run(capsys, "classes", "--p", "3", "--quotient", "5,6,7,8,9,10,11,12", "--format", "tsv")
    assert len(out.strip().split("\n")) == 81 + 1


def test_midafi(capsys):
    code, out, _ = run(capsys, "midafi", "--q", "3", "--alpha", "11", "--s", "2")
    d = json.loads(out)
    assert code == 0 and d["q"] == 3
    (c,) = d["characters"]
    assert c["degree"] == "27" and 11 not in c["kernel_roots"] and 12 in c["kernel_roots"]
    assert len(c["values"]) == 753


def test_family_and_chartable(capsys):
    code, out, _ = run(capsys, "family", "--q", "2", "--name", "F8,9")
    d = json.loads(out)
    assert code == 0 and len(d["characters"]) == 5
    code, out, _ = run(capsys, "chartable", "--q", "2")
    d = json.loads(out)
    assert code == 0 and len(d["characters"]) == 103
    assert all(d["checks"].values())
    code, out, _ = run(capsys, "chartable", "--q", "2", "--format", "tsv")
    rows = [r.split("\t") for r in out.strip().split("\n")[1:]]
    assert sum(int(r[2]) for r in rows) == 103


def test_verify_q2(capsys):
    code, out, _ = run(capsys, "verify", "--q", "2")
    d = json.loads(out)
    assert code == 0 and d["passed"]
    names = [c["name"] for c in d["checks"]]
    assert any("class count" in n for n in names)
    assert all(c["provenance"] for c in d["checks"])


def test_verify_subset_tsv(capsys):
    code, out, _ = run(capsys, "verify", "--p", "3", "--checks", "commutators,classes", "--format", "tsv")
    rows = out.strip().split("\n")
    assert code == 0 and len(rows) == 3 and all("PASS" in r for r in rows[1:])


@pytest.mark.parametrize("argv", [
    ["classes", "--q", "6"],
    ["classes", "--q", "4", "--p", "3"],
    ["classes", "--p", "2", "--n", "2", "--modulus", "1,0,1"],
    ["classes", "--p", "7"],
    ["chartable", "--q", "4"],
    ["verify", "--q", "4"],
    ["verify", "--q", "2", "--checks", "nonsense"],
    ["midafi", "--q", "2", "--alpha", "13"],
    ["midafi", "--q", "2", "--alpha", "3", "--s", "0"],
    ["family", "--q", "2", "--name", "F8,9,10-odd"],
    ["family", "--q", "2", "--name", "F99"],
    ["roots", "--threads", "0"],
    ["mul", "--q", "2", "1,2", "0"],
])
def test_configuration_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and "configuration error" in err and out == ""


def test_config_from_q():
    args = build_parser().parse_args(["classes", "--q", "9", "--threads", "4"])
    cfg = config_from_args(args)
    assert (cfg.p, cfg.n, cfg.q, cfg.threads) == (3, 2, 9, 4)
