import json
import pathlib

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fimod import corpus, io
from fimod.cli import main, run
from fimod.fi import relation_failures

from cli_cases import CASES
from conftest import small_random

GOLDEN = pathlib.Path(__file__).parent / "golden"


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_reports(name):
    report, code, _ = run(CASES[name])
    report.pop("seconds")
    assert code == 0
    assert io.dumps(report) == (GOLDEN / f"{name}.json").read_text()


def test_every_command_has_a_golden():
    from fimod.cli import COMMANDS
    assert {argv[0] for argv in CASES.values()} == set(COMMANDS)


def test_free_command_writes_module(tmp_path):
    out = tmp_path / "m.json"
    assert main(["free", "--d", "1", "--N", "3", "--coeff", "f2", "--out", str(out)]) == 0
    V = io.read_module(out)
    assert V.dim_list() == [0, 1, 2, 3]


def test_h0_of_zero_file(tmp_path, capsys):
    path = tmp_path / "zero.json"
    path.write_text(io.dumps(io.module_to_json(corpus.get("zero-f2"))))
    assert main(["h0", "--in", str(path)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert all(d == [0] for d in rep["result"]["levelDims"])


@pytest.mark.parametrize("name", corpus.names())
def test_module_round_trip(name):
    V = corpus.get(name)
    text = io.dumps(io.module_to_json(V))
    W = io.module_from_json(io.loads(text))
    assert io.dumps(io.module_to_json(W)) == text
    assert W.levels == V.levels and W.inclusions == V.inclusions


@given(st.integers(0, 10**6), st.sampled_from(["f2", "f5", "q", "z"]))
def test_random_round_trip(seed, tag):
    V = small_random(seed, tag)
    text = io.dumps(io.module_to_json(V))
    assert io.dumps(io.module_to_json(io.module_from_json(io.loads(text)))) == text


def test_morphism_round_trip():
    from fimod.generation import cover
    pi, _ = cover(small_random(4, "q"))
    text = io.dumps(io.morphism_to_json(pi))
    g = io.morphism_from_json(io.loads(text))
    assert g == pi and io.dumps(io.morphism_to_json(g)) == text


def test_determinism(monkeypatch):
    argv = ["closed-check", "--in", "corpus:free-1-f2", "--theory", "zero", "--trials", "4"]
    monkeypatch.setenv("FIMOD_SEED", "11")
    a, _, _ = run(argv)
    b, _, _ = run(argv)
    assert a["seed"] == 11
    a.pop("seconds"), b.pop("seconds")
    assert a == b


def _error(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().err)


def test_error_kinds(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert _error(capsys, ["h0", "--in", str(bad)])[0] == 2
    code, err = _error(capsys, ["shift", "--in", "corpus:free-1-f2", "--a", "9"])
    assert (code, err["error"]) == (3, "validation")
    code, err = _error(capsys, ["extend", "--in", "corpus:doubling-z", "--N", "7"])
    assert (code, err["error"]) == (4, "truncation-exceeded")
    code, err = _error(capsys, ["envelope", "--in", "corpus:mixed-z", "--theory", "ztorsion"])
    assert (code, err["error"]) == (5, "capability")
    code, err = _error(capsys, ["torsion-sub", "--in", "corpus:free-1-f2", "--theory", "bogus"])
    assert code == 3


def test_plugin_contract_error():
    from fimod import torsion as T
    from fimod.errors import PluginContractError
    from fimod.modules import ModObj, identity

    class Broken(T.TorsionTheory):
        name = "broken"

        def radical(self, A):
            # claims everything at odd levels, nothing at even ones: not a subfunctor in general
            return (A, identity(A)) if A.dim() % 2 else (ModObj.zero(A.coeff), T.M.zero_map(ModObj.zero(A.coeff), A))

    V = corpus.get("free-1-f2")
    with pytest.raises(PluginContractError):
        T.radical_levelwise(V, Broken(V.coeff))


def test_bad_documents():
    from fimod.errors import ParseError, ValidationError
    with pytest.raises(ParseError):
        io.module_from_json({"format": "other"})
    doc = io.module_to_json(corpus.get("free-1-f2"))
    doc["levels"] = doc["levels"][:-1]
    with pytest.raises(ValidationError):
        io.module_from_json(doc)
    doc = io.module_to_json(corpus.get("free-2-f2"))
    doc["transpositions"][3][0][0]["rows"][0][0] = "1" if doc["transpositions"][3][0][0]["rows"][0][0] == "0" else "0"
    with pytest.raises(ValidationError):
        io.module_from_json(doc)


def test_table_output(capsys):
    assert main(["stable-range", "--in", "corpus:atomic-0-f2", "--table"]) == 0
    out = capsys.readouterr().out
    assert "Nbound: 2" in out and "Nmin: 1" in out


def test_corpus_entries():
    assert corpus.get("free-1-f2").dim_list() == [0, 1, 2, 3, 4, 5]
    assert corpus.get("atomic-0-z").dim_list() == [1, 0, 0, 0, 0, 0]
    V = corpus.get("mixed-z")
    assert all(L.parts == ((0, 2),) for L in V.levels)
    for name in corpus.names():
        assert relation_failures(corpus.get(name)) == [], name
