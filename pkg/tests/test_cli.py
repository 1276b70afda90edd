import json

import pytest
from click.testing import CliRunner

from unitedk.cli import main
from unitedk.crtmod import zero_module
from unitedk.document import load_document, render_document, save_document
from unitedk.exactalg import IntMatrix

ALPHA = "0,1,0,0;1,0,0,0;0,0,0,1;0,0,1,0"


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


@pytest.fixture()
def docs(tmp_path):
    g, h = tmp_path / "g.json", tmp_path / "h.json"
    assert run("build-p", "--orders", "2,2,2,2", "--involution", ALPHA, "-o", g).exit_code == 0
    assert run("build-p", "--builtin", "H-beta", "-o", h).exit_code == 0
    return g, h


def test_build_p_prints_eigen_parts(tmp_path):
    out = tmp_path / "g.json"
    r = run("build-p", "--orders", "2,2,2,2", "--involution", ALPHA, "-o", out)
    assert r.exit_code == 0
    assert "G+ = Z2^2" in r.output and "G- = Z2^2" in r.output
    assert run("verify", out).exit_code == 0


def test_build_p_second_fixture():
    r = run("build-p", "--orders", "4,2,2", "--involution", "1,0,2;1,1,0;0,0,1")
    assert r.exit_code == 0
    assert "G+ = Z2^2" in r.output and "G- = Z2^2" in r.output


def test_build_p_to_stdout_is_a_document():
    r = run("build-p", "--builtin", "G-alpha", "-o", "-")
    assert r.exit_code == 0
    assert json.loads(r.output)["name"] == "G-alpha"


@pytest.mark.parametrize("orders, matrix, failing", [
    ("2", "1", "ker(1+alpha) = image(1-alpha)"),
    ("0", "1", "ker(1-alpha) = image(1+alpha)"),
    ("0", "-1", "ker(1+alpha) = image(1-alpha)"),
])
def test_build_p_inadmissible(orders, matrix, failing):
    r = run("build-p", "--orders", orders, "--involution", matrix)
    assert r.exit_code == 4
    assert failing in r.output


def test_build_p_not_an_involution():
    r = run("build-p", "--orders", "4", "--involution", "2")
    assert r.exit_code == 3 and "not an involution" in r.output
    r = run("build-p", "--orders", "2,4", "--involution", "0,1;1,0")
    assert r.exit_code == 3 and "not an involution" in r.output


@pytest.mark.parametrize("args", [
    ["--orders", "2,x", "--involution", "1"],
    ["--orders", "2,2", "--involution", "1,0"],
    ["--orders", "-2", "--involution", "1"],
    ["--orders", "2"],
    ["--builtin", "G-alpha", "--orders", "2"],
])
def test_build_p_bad_input(args):
    assert run("build-p", *args).exit_code == 2


def test_verify_reports_tau_mutation(docs, tmp_path):
    g, _ = docs
    M = load_document(g).module.replace("tau", 1, IntMatrix.zeros(2, 2))
    bad = tmp_path / "bad.json"
    save_document(bad, M)
    r = run("verify", bad)
    assert r.exit_code == 1
    assert "sequence C" in r.output
    assert "lhs =" in r.output and "rhs =" in r.output
    js = run("verify", bad, "--format", "json")
    assert js.exit_code == 1
    data = json.loads(js.output)
    assert not data["passed"]
    assert any(v["sequence"] == "C" for v in data["exactness"])


def test_verify_empty_module(tmp_path):
    p = tmp_path / "zero.json"
    p.write_text(render_document(zero_module()))
    assert run("verify", p).exit_code == 0


def test_strict_flag(docs, tmp_path):
    # 2 etaO != 0 on Z4 breaks only a strict identity
    g, _ = docs
    raw = json.loads(g.read_text())
    raw["O"] = [[4], [4]] + [[]] * 6
    raw["T"] = [[]] * 8
    raw["U"] = [[]] * 8
    for fam, mats in raw["maps"].items():
        raw["maps"][fam] = [[] for _ in mats]
    raw["maps"]["etaO"][0] = [[1]]
    raw["maps"]["xi"] = [[]] * 8
    p = tmp_path / "eta.json"
    p.write_text(json.dumps(raw))
    strict = run("verify", p, "--format", "json")
    loose = run("verify", p, "--no-strict", "--format", "json")
    strict_ids = {v["relation"] for v in json.loads(strict.output)["relations"]}
    loose_ids = {v["relation"] for v in json.loads(loose.output)["relations"]}
    assert "S1" in strict_ids and "S1" not in loose_ids


def test_parse_errors(tmp_path):
    p = tmp_path / "x.json"
    p.write_text('{"O": [}')
    r = run("verify", p)
    assert r.exit_code == 2 and "line 1 column" in r.output
    p.write_text(json.dumps({"O": [], "U": [], "T": [], "maps": {}, "extra": 1}))
    r = run("verify", p)
    assert r.exit_code == 2 and "extra" in r.output
    assert run("verify", tmp_path / "missing.json").exit_code == 2
    big = json.loads(render_document(zero_module()))
    big["O"][0] = [2 ** 64]
    p.write_text(json.dumps(big))
    assert run("fingerprint", p).exit_code == 2


def test_compare(docs, tmp_path):
    g, h = docs
    r = run("compare", g, h)
    assert r.exit_code == 1
    assert "U: first difference at degree 0: 2,2,2,2 vs 2,2,4" in r.output
    assert "O: degreewise isomorphic" in r.output
    js = json.loads(run("compare", g, h, "--format", "json").output)
    assert js["differs"]["O"] == [] and js["differs"]["U"] == [0, 2, 4, 6]
    assert run("compare", g, g).exit_code == 0
    g4 = tmp_path / "g4.json"
    assert run("shift", g, 4, "-o", g4).exit_code == 0
    assert run("compare", g, g4).exit_code == 0


def test_shift(docs, tmp_path):
    g, _ = docs
    r = run("shift", g, 8)
    assert r.output == g.read_text()
    assert run("shift", g, 0).output == g.read_text()
    g3 = tmp_path / "g3.json"
    run("shift", g, 3, "-o", g3)
    assert run("verify", g3).exit_code == 0
    assert run("shift", g, -5).output == run("shift", g, 3).output


def test_fingerprint(docs):
    _, h = docs
    r = run("fingerprint", h)
    assert r.exit_code == 0
    assert "2,2,4" in r.output
    js = json.loads(run("fingerprint", h, "--format", "json").output)
    assert js["U"][0] == [2, 2, 4]


def test_demo():
    a, b = run("demo"), run("demo")
    assert a.exit_code == 0
    assert a.output == b.output
    assert "[FAIL]" not in a.output
    assert "first difference at degree 0: 2,2,2,2 vs 2,2,4" in a.output


def test_demo_with_free_left_side_fails():
    r = run("demo", "--left", "0,0|0,1;1,0")
    assert r.exit_code == 1
    assert "[FAIL] O-parts agree" in r.output


def test_demo_json():
    data = json.loads(run("demo", "--format", "json").output)
    assert data["passed"] and all(c["passed"] for c in data["checks"])


def test_demo_bad_fixture():
    assert run("demo", "--left", "nonsense").exit_code == 2


def test_search_cli():
    r = run("search", "--max-order", 16)
    assert r.exit_code == 0
    assert "G = 2,2,2,2" in r.output and "G = 2,2,4" in r.output
    assert run("search", "--max-order", 65).exit_code == 2
    small = json.loads(run("search", "--max-order", 2, "--format", "json").output)
    assert small["buckets"] == []
