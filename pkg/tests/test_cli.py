import io
import json
import re
from importlib import resources
from math import comb

import numpy as np
import pytest
from cli_corpus import CORPUS, DATA, P2
from conftest import sym_ring
from hypothesis import given, settings
from hypothesis import strategies as st
from jsonschema import Draft202012Validator

from bggtate import cli
from bggtate.homalg import random_presentation


def invoke(argv):
    out = io.StringIO()
    code = cli.run(argv, out)
    return code, out.getvalue()


def schema(name):
    return json.loads(resources.files("bggtate").joinpath("schemas", f"{name}.json").read_text())


# ---------------------------------------------------------------------------
# parsing


def test_parse_structure_sheaf_document():
    doc = cli.parse_input('{"ring": {"n": 2, "p": 32003}, "modules": {"O": {"gens": [0], "rels": []}}}')
    assert doc.n == 2 and doc.field_spec == 32003
    M = doc.module("O", doc.ring())
    assert M.gens.generator_degrees() == [0]


def test_parse_example_documents():
    for f in ("p1.json", "p2.json", "p3.json", "qq.json"):
        doc = cli.parse_input((DATA / f).read_text())
        assert doc.modules
    assert Draft202012Validator(schema("input")).is_valid(json.loads((DATA / "p2.json").read_text()))


@pytest.mark.parametrize(
    "fname,line,fragment",
    [
        ("bad1.json", 4, "exponent vector has length 2, expected 3"),
        ("bad2.json", 4, "degree mismatch"),
        ("bad3.json", 1, "bad field spec 12"),
        ("bad4.json", 1, "Expecting"),
    ],
)
def test_bad_documents_carry_positions(fname, line, fragment):
    with pytest.raises(cli.InputError) as exc:
        cli.parse_input((DATA / fname).read_text())
    e = exc.value
    assert e.line == line and e.column >= 1
    assert fragment in e.message
    assert str(e).startswith(f"input error at line {line}, column {e.column}:")


def test_exponent_error_points_at_the_exponent_vector():
    text = '{\n  "ring": {"n": 1},\n  "modules": {"m": {"gens": [0], "rels": [[[[[1], 1]]]]}}\n}'
    with pytest.raises(cli.InputError) as exc:
        cli.parse_input(text)
    assert (exc.value.line, exc.value.column) == (3, text.splitlines()[2].index("[1]") + 1)


@pytest.mark.parametrize(
    "text,fragment",
    [
        ('{"ring": {"n": 0}}', "ring.n"),
        ('{"ring": {"n": 2, "field": "R"}}', "bad field spec"),
        ('{"modules": {}}', "missing ring"),
        ('{"ring": {"n": 1, "p": 5}, "modules": {"m": {"gens": [0], "rels": [[[[[1, 0], 1.5]]]]}}}', "coefficient"),
        ('{"ring": {"n": 1, "p": 5}, "modules": {"m": {"gens": [0], "rels": [[[[[1, 0], "1/2"]]]]}}}', "coefficient"),
        ('{"ring": {"n": 1}, "modules": {"m": {"gens": [0, 1], "rels": [[[]]]}}}', "one polynomial per generator"),
        ('{"ring": {"n": 1}, "lambda_modules": {"a": {"builtin": "nope"}}}', "unknown builtin"),
        ('{"ring": {"n": 1}, "lambda_modules": {"a": {"dims": {"0": 1}, "action": [{"var": 0, "degree": 0, "matrix": [[1]]}]}}}', "matrix must be 0 x 1"),
        ('{"ring": {"n": 1}, "complexes": {"c": {"terms": {"0": "ghost"}}}}', "unknown exterior module"),
    ],
)
def test_invalid_documents_rejected(text, fragment):
    with pytest.raises(cli.InputError) as exc:
        cli.parse_input(text)
    assert fragment in exc.value.message
    assert exc.value.line is not None


def test_parse_window():
    assert cli.parse_window("-4..3") == (-4, 3)
    assert cli.parse_window(" 2 .. 2 ") == (2, 2)
    for bad in ("3..1", "a..b", "", "1-2"):
        with pytest.raises(cli.InputError):
            cli.parse_window(bad)


def test_serialize_round_trip_of_example():
    doc = cli.parse_input((DATA / "p2.json").read_text())
    again = cli.parse_input(cli.serialize(doc))
    assert again == doc
    assert cli.serialize(again) == cli.serialize(doc)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([5, 7, 32003]), st.integers(1, 3))
def test_random_module_round_trip(seed, p, n):
    rng = np.random.default_rng(seed)
    S = sym_ring(n, p)
    M = random_presentation(S, rng)
    entry = cli.module_entry(M)
    doc = cli.InputDocument(n, p, {"m": entry})
    text = cli.serialize(doc)
    back = cli.parse_input(text)
    assert back == doc
    assert cli.serialize(back) == text
    # the realised module is the one we started from
    N = back.module("m", S)
    assert N.gens.generator_degrees() == M.gens.generator_degrees()
    assert [N.dim(d) for d in range(-2, 4)] == [M.dim(d) for d in range(-2, 4)]


# ---------------------------------------------------------------------------
# commands


def test_cohomology_table_of_structure_sheaf_is_binomial():
    code, txt = invoke(["cohomology-table", P2, "--module", "O", "--window", "-4..3", "--format", "json"])
    assert code == cli.EXIT_OK
    tab = json.loads(txt)["table"]
    rows = {int(i): r for i, r in tab["rows"].items()}
    for k, d in enumerate(range(-4, 4)):
        assert rows[0][k] == (comb(d + 2, 2) if d >= 0 else 0)
        assert rows[1][k] == 0
        assert rows[2][k] == (comb(-d - 1, 2) if d <= -3 else 0)


def test_split_check_on_free_module():
    code, txt = invoke(["split-check", P2, "--module", "split"])
    assert code == 0
    assert txt == "splits: O(-1) ⊕ O(2)\n"


def test_ht_of_em_fixture_is_single_term():
    code, txt = invoke(["ht", P2, "--module", "euler", "--format", "json"])
    assert code == 0
    out = json.loads(txt)
    rows = out["ht"]["betti"]["rows"]
    assert sum(v for r in rows.values() for v in r) == 1
    assert out["ht"]["partial"] is False
    assert out["conditions"]["condition_1"] and out["conditions"]["condition_2"]


def test_em_fixture_prediction_matches_ht():
    _, em = invoke(["em-fixture", P2, "--module", "k", "--i", "1", "--format", "json"])
    _, ht = invoke(["ht", P2, "--module", "euler", "--format", "json"])
    em, ht = json.loads(em), json.loads(ht)
    assert em["M"]["gens"] == [-1, -1, -1]
    (p, c), = [(p, c) for p, c in em["prediction"]["counts"].items() if c]
    assert ht["ht"]["strands"] == {p: {"1": c}}


@pytest.mark.parametrize(
    "argv,code",
    [
        (["betti", P2], cli.EXIT_INPUT),
        (["betti", P2, "--module", "nope"], cli.EXIT_INPUT),
        (["tate", P2, "--module", "O"], cli.EXIT_INPUT),
        (["tate", P2, "--module", "O", "--window", "2..1"], cli.EXIT_INPUT),
        (["betti", P2, "--module", "O", "--prime", "12"], cli.EXIT_INPUT),
        (["frobnicate", P2], cli.EXIT_INPUT),
        (["betti", str(DATA / "missing.json"), "--module", "O"], cli.EXIT_INPUT),
        (["betti", str(DATA / "bad1.json"), "--module", "m"], cli.EXIT_INPUT),
        (["tate", P2, "--module", "O", "--window", "1..1"], cli.EXIT_COMPUTE),
        (["em-fixture", P2, "--module", "O", "--i", "1"], cli.EXIT_COMPUTE),
        (["betti", P2, "--module", "O"], cli.EXIT_OK),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert invoke(argv)[0] == code
    err = capsys.readouterr().err
    if code == cli.EXIT_INPUT and argv[0] != "frobnicate":
        assert "input error" in err
    if code == cli.EXIT_COMPUTE:
        assert err.startswith("computation error:")


def test_prime_override_and_env_default(monkeypatch):
    doc = cli.parse_input('{"ring": {"n": 1}, "modules": {"O": {"gens": [0]}}}')
    monkeypatch.setenv("BGGTATE_PRIME", "101")
    assert doc.ring().field.p == 101
    assert doc.ring(7).field.p == 7


def test_out_file_matches_json_stdout(tmp_path):
    target = tmp_path / "o.json"
    code, txt = invoke(["betti", P2, "--module", "euler", "--format", "json", "--out", str(target)])
    assert code == 0
    assert target.read_text() == txt


def _numbers(s):
    return [int(x) for x in re.findall(r"(?<![\w^])-?\d+(?![\w/])", s)]


def _json_numbers(obj):
    out = set()
    if isinstance(obj, bool):
        return out
    if isinstance(obj, int):
        out.add(obj)
    elif isinstance(obj, str):
        out.update(int(x) for x in re.findall(r"-?\d+", obj))
    elif isinstance(obj, dict):
        for k, v in obj.items():
            out |= _json_numbers(k) | _json_numbers(v)
    elif isinstance(obj, list):
        for v in obj:
            out |= _json_numbers(v)
    return out


@pytest.mark.parametrize("argv", CORPUS, ids=lambda a: "-".join(x.rsplit("/", 1)[-1] for x in a))
def test_corpus_json_validates_and_text_agrees(argv):
    code, txt = invoke(argv)
    assert code == 0
    code, js = invoke(argv + ["--format", "json"])
    assert code == 0
    out = json.loads(js)
    Draft202012Validator(schema(out["command"])).validate(out)
    missing = set(_numbers(txt)) - _json_numbers(out)
    assert not missing, f"text shows numbers absent from JSON: {sorted(missing)}"


def test_table_text_and_json_have_identical_cells():
    _, txt = invoke(["cohomology-table", P2, "--module", "euler", "--window", "-5..2"])
    _, js = invoke(["cohomology-table", P2, "--module", "euler", "--window", "-5..2", "--format", "json"])
    rows = json.loads(js)["table"]["rows"]
    body = [line.split() for line in txt.strip().splitlines()]
    text_rows = {}
    for parts in body:
        if parts and parts[0].startswith("h^"):
            text_rows[parts[0]] = [None if x == "?" else int(x) for x in parts[1:]]
    assert text_rows == {f"h^{i}": r for i, r in rows.items()}
    assert [int(x) for x in body[0]] == json.loads(js)["table"]["degrees"]


def test_repeated_runs_are_byte_identical():
    argv = ["tate", P2, "--module", "O", "--window", "-2..2", "--format", "json"]
    assert invoke(argv) == invoke(argv)
