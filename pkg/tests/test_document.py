import json

import pytest

from unitedk.crtmod import direct_sum, shift, verify, zero_module
from unitedk.document import (
    DocumentError,
    load_document,
    parse_document,
    render_document,
    save_document,
)
from unitedk.pconstruct import build_p, builtin_example, involutive_group

FIXTURES = {
    "G-alpha": lambda: build_p(builtin_example("G-alpha")),
    "H-beta": lambda: build_p(builtin_example("H-beta")),
    "swap": lambda: build_p(involutive_group((0, 0), [[0, 1], [1, 0]])),
    "zero": zero_module,
}


@pytest.mark.parametrize("name", FIXTURES)
def test_round_trip(name):
    M = FIXTURES[name]()
    text = render_document(M, name=name)
    doc = parse_document(text)
    assert doc.module == M
    assert doc.name == name
    assert render_document(doc.module, name=name) == text
    assert verify(doc.module).passed == verify(M).passed


def test_round_trip_of_sum_and_shift():
    M = direct_sum(FIXTURES["G-alpha"](), FIXTURES["H-beta"]())
    for k in range(9):
        S = shift(M, k)
        assert parse_document(render_document(S)).module == S


def test_shift_by_eight_renders_identically():
    M = FIXTURES["H-beta"]()
    assert render_document(shift(M, 8)) == render_document(M)


def test_zero_dimensional_encoding():
    raw = json.loads(render_document(zero_module()))
    assert raw["O"] == [[]] * 8
    assert raw["maps"]["c"] == [[]] * 8


def _raw(name="G-alpha"):
    return json.loads(render_document(FIXTURES[name]()))


def _error(raw) -> str:
    with pytest.raises(DocumentError) as info:
        parse_document(json.dumps(raw))
    return str(info.value)


def test_unknown_fields_are_named():
    raw = _raw()
    raw["colour"] = "red"
    assert "colour" in _error(raw)
    raw = _raw()
    raw["maps"]["etaT"] = raw["maps"]["etaO"]
    assert "maps.etaT" in _error(raw)


def test_missing_fields():
    raw = _raw()
    del raw["maps"]["tau"]
    assert "maps.tau" in _error(raw)
    raw = _raw()
    del raw["T"]
    assert "T" in _error(raw)


def test_bad_values():
    raw = _raw()
    raw["U"][0] = [4, 2]
    assert "U[0]" in _error(raw)
    raw = _raw()
    raw["maps"]["c"][0][0][0] = 2 ** 63
    assert "64-bit" in _error(raw)
    raw = _raw()
    raw["maps"]["c"][0][0][0] = True
    assert "maps.c[0][0][0]" in _error(raw)
    raw = _raw()
    raw["maps"]["c"][0] = [[1, 0], [0]]
    assert "maps.c[0][1]" in _error(raw)
    raw = _raw()
    raw["O"] = raw["O"][:7]
    assert "8 entries" in _error(raw)


def test_syntax_error_location():
    with pytest.raises(DocumentError, match="line 2 column"):
        parse_document('{\n  "O": [,\n}')


def test_int64_boundary_is_accepted():
    raw = _raw("swap")
    big = 2 ** 63 - 1
    raw["maps"]["psiU"][0] = [[big, 0], [0, -big - 1]]
    M = parse_document(json.dumps(raw)).module
    assert M.matrix("psiU", 0).tolist() == [[big, 0], [0, -big - 1]]
    assert not verify(M).passed


def test_wrong_shape_parses_and_fails_verification():
    raw = _raw()
    raw["maps"]["c"][0] = [[1, 0, 0]]
    M = parse_document(json.dumps(raw)).module
    report = verify(M)
    assert [v.kind for v in report.structure] == ["shape"]


def test_save_and_load(tmp_path):
    M = FIXTURES["H-beta"]()
    path = tmp_path / "h.json"
    save_document(path, M, name="H", provenance="test")
    doc = load_document(path)
    assert doc.module == M and doc.name == "H" and doc.provenance == "test"
