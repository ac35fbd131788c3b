# -*- coding: utf-8 -*-

import json

import pytest

import cli
from conftest import fixture_path, golden
from automaton_io import load_document, parse_document
from conformance import build_fault_model
from oracle import enumerate_vpa
from vpa_core import Vpa


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def check_args(spec="counter_spec", iut="counter_iut", d="desired_abx", f="forbidden_anbn1"):
    return ["check", fixture_path(spec), fixture_path(iut), fixture_path(d), fixture_path(f)]


###################################################################################################
# check
###################################################################################################

def test_check_desired_missing(capsys):
    code, out, _ = run(capsys, *check_args())
    assert code == cli.EXIT_FAIL
    assert out == golden("check_desired_missing")


def test_check_isomorphic_iut_passes(capsys):
    code, out, _ = run(capsys, *check_args(iut="iut_isomorphic"))
    assert code == cli.EXIT_OK
    assert out == golden("check_isomorphic_pass")


def test_check_forbidden_present(capsys):
    code, out, _ = run(capsys, *check_args(iut="iut_isomorphic", f="forbidden_apx"))
    assert code == cli.EXIT_FAIL
    assert out == golden("check_forbidden_present")


def test_check_empty_desired_and_forbidden(capsys):
    code, out, _ = run(capsys, *check_args(d="empty_language", f="empty_language"))
    assert code == cli.EXIT_OK
    assert out == golden("check_isomorphic_pass")


def test_check_json(capsys):
    code, out, _ = run(capsys, *check_args(), "--json")
    assert code == cli.EXIT_FAIL
    report = json.loads(out)
    assert report["outcome"] == "FAIL"
    assert report["witness"] == list("aabbx")
    assert report["clause"] == "DesiredMissing"
    assert report["oracle"] == {"maxLen": 6, "consistent": True}


def test_check_witness_run(capsys):
    code, out, _ = run(capsys, *check_args(), "--witness")
    lines = out.splitlines()
    assert code == cli.EXIT_FAIL
    assert "run:" in lines
    assert "  (q0, ⊥)" in lines
    assert "  x [q2 -x/_BOTTOM_-> q1] (q1, ⊥)" in lines


def test_check_oracle_bound_below_witness(capsys):
    code, out, _ = run(capsys, *check_args(), "--max-oracle-len", "4")
    assert code == cli.EXIT_FAIL
    assert out.splitlines()[-1] == "oracle: consistent up to length 4"


def test_check_rejects_ill_formed_spec(capsys):
    code, out, err = run(capsys, *check_args(spec="bad_partition"))
    assert code == cli.EXIT_ERROR
    assert out == ""
    assert err.startswith("error: ")
    assert fixture_path("bad_partition") in err


def test_check_rejects_wrong_kind(capsys):
    code, _, err = run(capsys, *check_args(d="counter_spec"))
    assert code == cli.EXIT_ERROR
    assert "kind" in err


def test_invalid_env_bound(capsys, monkeypatch):
    monkeypatch.setenv("VPCONF_ORACLE_LEN", "many")
    code, _, err = run(capsys, *check_args())
    assert code == cli.EXIT_ERROR
    assert "VPCONF_ORACLE_LEN" in err


def test_negative_bound(capsys):
    code, _, err = run(capsys, "enumerate", fixture_path("anbn"), "--max-len", "-1")
    assert code == cli.EXIT_ERROR
    assert "--max-len" in err


###################################################################################################
# Inspection commands
###################################################################################################

@pytest.mark.parametrize(
    "name, max_len, expected",
    [("anbn", "4", "enumerate_anbn_len4"), ("drinks", "2", "enumerate_drinks_len2")],
)
def test_enumerate(capsys, name, max_len, expected):
    code, out, _ = run(capsys, "enumerate", fixture_path(name), "--max-len", max_len)
    assert code == cli.EXIT_OK
    assert out == golden(expected)


@pytest.mark.parametrize(
    "name, expected",
    [("anbn", "empty_anbn"), ("anbn_final_sf", "empty_anbn_final_sf"), ("desired_abx", "empty_desired_abx")],
)
def test_empty_prints_shortest_word(capsys, name, expected):
    assert run(capsys, "empty", fixture_path(name))[1] == golden(expected)


def test_empty_language(capsys):
    assert run(capsys, "empty", fixture_path("empty_language"))[1] == "EMPTY\n"


@pytest.mark.parametrize(
    "word, code, expected",
    [("aabb", cli.EXIT_OK, "member_anbn_aabb"), ("aab", cli.EXIT_FAIL, "member_anbn_aab")],
)
def test_member(capsys, word, code, expected):
    got, out, _ = run(capsys, "member", fixture_path("anbn"), word)
    assert got == code
    assert out == golden(expected)


def test_member_token_forms(capsys):
    assert run(capsys, "member", fixture_path("anbn"), "a b")[0] == cli.EXIT_OK
    assert run(capsys, "member", fixture_path("anbn"), "a,a,b,b")[0] == cli.EXIT_OK
    assert run(capsys, "member", fixture_path("anbn"), "")[0] == cli.EXIT_OK
    assert run(capsys, "member", fixture_path("anbn"), cli.EMPTY_WORD)[0] == cli.EXIT_OK


def test_empty_word_is_visible():
    assert cli.format_witness(()) == "ε"
    assert cli.format_witness(("a", "b")) == "ab"
    assert cli.format_word(()) == ""


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", fixture_path("counter_spec"))
    assert (code, out) == (cli.EXIT_OK, golden("validate_counter_spec"))
    code, out, _ = run(capsys, "validate", fixture_path("bad_partition"))
    assert (code, out) == (cli.EXIT_ERROR, golden("validate_bad_partition"))


def test_malformed_json(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    code, _, err = run(capsys, "validate", str(path))
    assert code == cli.EXIT_ERROR
    assert "line 1 column 2" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "empty", str(tmp_path / "nope.json"))
    assert code == cli.EXIT_ERROR
    assert "nope.json" in err


###################################################################################################
# Constructions
###################################################################################################

@pytest.mark.parametrize(
    "argv, expected",
    [
        (("complement", "anbn"), "complement_anbn"),
        (("contract", "counter_spec"), "contract_counter_spec"),
        (("to-vpa", "drinks"), "to_vpa_drinks"),
        (("intersect", "anbn", "anbn_final_sf"), "intersect_anbn_anbn_final_sf"),
        (("union", "anbn", "anbn_final_sf"), "union_anbn_anbn_final_sf"),
        (("suite", "counter_spec", "empty_language", "forbidden_apx"), "suite_counter_spec_forbidden_apx"),
    ],
)
def test_construction_output_is_canonical(capsys, argv, expected):
    command, *names = argv
    code, out, _ = run(capsys, command, *(fixture_path(n) for n in names))
    assert code == cli.EXIT_OK
    assert out == golden(expected)


def test_suite_golden_language():
    suite = parse_document(golden("suite_counter_spec_forbidden_apx"))
    assert enumerate_vpa(suite, 5).words == {("a",) * n + ("x",) for n in range(1, 5)}


def test_complement_twice(capsys, tmp_path, anbn):
    once = tmp_path / "once.json"
    code, out, _ = run(capsys, "complement", fixture_path("anbn"))
    assert code == cli.EXIT_OK
    once.write_text(out, encoding="utf-8")
    code, out, _ = run(capsys, "complement", str(once))
    twice = parse_document(out)
    assert enumerate_vpa(twice, 6).words == enumerate_vpa(anbn, 6).words


def test_intersect(capsys, anbn_sf):
    code, out, _ = run(capsys, "intersect", fixture_path("anbn"), fixture_path("anbn_final_sf"))
    assert code == cli.EXIT_OK
    assert enumerate_vpa(parse_document(out), 6).words == enumerate_vpa(anbn_sf, 6).words


def test_union_alphabet_mismatch(capsys):
    code, _, err = run(capsys, "union", fixture_path("anbn"), fixture_path("desired_abx"))
    assert code == cli.EXIT_ERROR
    assert "alphabet mismatch" in err


def test_contract_keeps_live_spec(capsys, counter_spec):
    code, out, _ = run(capsys, "contract", fixture_path("counter_spec"))
    assert code == cli.EXIT_OK
    assert parse_document(out) == counter_spec


def test_to_vpa(capsys, drinks):
    code, out, _ = run(capsys, "to-vpa", fixture_path("drinks"))
    a = parse_document(out)
    assert code == cli.EXIT_OK
    assert isinstance(a, Vpa)
    assert a.finals == a.states == drinks.underlying.states


def test_suite(capsys, counter_spec, desired, forbidden):
    code, out, _ = run(
        capsys, "suite", fixture_path("counter_spec"), fixture_path("desired_abx"), fixture_path("forbidden_anbn1")
    )
    assert code == cli.EXIT_OK
    expected = build_fault_model(counter_spec, desired, forbidden).suite
    assert enumerate_vpa(parse_document(out), 6).words == enumerate_vpa(expected, 6).words


def test_output_documents_are_valid(capsys, tmp_path):
    code, out, _ = run(capsys, "complement", fixture_path("anbn_complement"))
    path = tmp_path / "c.json"
    path.write_text(out, encoding="utf-8")
    assert code == cli.EXIT_OK
    assert isinstance(load_document(str(path)), Vpa)
