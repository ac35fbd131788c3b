# -*- coding: utf-8 -*-

import pytest

from conftest import AB, ABX, assert_non_blocking, rngs
from errors import ContractError
from generators import mutate, random_deterministic_epsilon_vpa, random_deterministic_vpa, random_iovpts
from oracle import enumerate_otr, enumerate_vpa, word_order
from vpa_algebra import empty_vpa
from vpa_core import Kind, accepts, is_deterministic, make_vpa
from vpts_core import induced_vpa
import conformance
from conformance import (
    Clause,
    Outcome,
    build_fault_model,
    check_conformance,
    evaluate_conformance_bounded,
    is_empty_with_witness,
    passes_suite,
    suite_bound,
)


def in_intersection(iut, suite, max_len):
    return enumerate_otr(iut, max_len).words & enumerate_vpa(suite, max_len).words


###################################################################################################
# Emptiness
###################################################################################################

def test_emptiness_witnesses(anbn, anbn_sf, desired):
    assert is_empty_with_witness(anbn).witness == ()
    assert is_empty_with_witness(anbn_sf).witness == ("a", "b")
    assert is_empty_with_witness(desired).witness == ("a", "b", "x")


def test_emptiness_of_empty_languages(load):
    assert is_empty_with_witness(load("empty_language")).empty
    assert is_empty_with_witness(empty_vpa(AB)).empty
    no_initial = make_vpa(AB, ["p"], [], [], [], ["p"])
    assert is_empty_with_witness(no_initial).empty


def test_emptiness_witness_is_least_accepted_word():
    for rng in rngs(47, 40):
        a = random_deterministic_vpa(rng, 4, AB)
        words = enumerate_vpa(a, 6).words
        result = is_empty_with_witness(a)
        if words:
            assert not result.empty
            assert result.witness == min(words, key=word_order)
        elif not result.empty:
            assert len(result.witness) > 6


###################################################################################################
# Worked examples
###################################################################################################

def test_counter_iut_fails_with_desired_missing(counter_iut, counter_spec, desired, forbidden):
    verdict = check_conformance(counter_iut, counter_spec, desired, forbidden)
    assert verdict.outcome is Outcome.FAIL
    assert verdict.witness == tuple("aabbx")
    assert verdict.clause is Clause.DESIRED_MISSING
    assert verdict.desired_missing and not verdict.forbidden_present


def test_isomorphic_iut_passes(iut_iso, counter_spec, desired, forbidden):
    verdict = check_conformance(iut_iso, counter_spec, desired, forbidden)
    assert verdict.passed
    assert verdict.witness is None
    suite = build_fault_model(counter_spec, desired, forbidden).suite
    assert passes_suite(iut_iso, suite, 8)
    assert not in_intersection(iut_iso, suite, 8)


def test_forbidden_present(iut_iso, counter_spec, desired, forbidden_apx):
    verdict = check_conformance(iut_iso, counter_spec, desired, forbidden_apx)
    assert verdict.outcome is Outcome.FAIL
    assert verdict.clause is Clause.FORBIDDEN_PRESENT
    suite = build_fault_model(counter_spec, desired, forbidden_apx).suite
    common = in_intersection(iut_iso, suite, 4)
    assert tuple("aax") in common
    assert verdict.witness == min(common, key=word_order) == tuple("ax")


def test_empty_desired_and_forbidden_pass(counter_iut, counter_spec, load):
    nothing = load("empty_language")
    assert check_conformance(counter_iut, counter_spec, nothing, nothing).passed


def test_bounded_evaluation_agrees(counter_iut, iut_iso, counter_spec, desired, forbidden):
    assert evaluate_conformance_bounded(counter_iut, counter_spec, desired, forbidden, 6) == tuple("aabbx")
    assert evaluate_conformance_bounded(counter_iut, counter_spec, desired, forbidden, 4) is None
    assert evaluate_conformance_bounded(iut_iso, counter_spec, desired, forbidden, 8) is None


def test_verdict_to_dict(counter_iut, counter_spec, desired, forbidden):
    report = check_conformance(counter_iut, counter_spec, desired, forbidden).to_dict()
    assert report["outcome"] == "FAIL"
    assert report["witness"] == ["a", "a", "b", "b", "x"]
    assert report["clause"] == "DesiredMissing"
    assert report["bound"] == suite_bound(3, 3, 3)
    assert 0 < report["suiteStates"] <= report["bound"]
    assert set(report["timings"]) == {"fault_model", "emptiness", "total"}


###################################################################################################
# Fault model
###################################################################################################

def test_suite_bound():
    assert suite_bound(3, 3, 3) == 130
    assert suite_bound(1, 1, 1) == 6


def test_fault_model_provenance(counter_spec, desired, forbidden):
    model = build_fault_model(counter_spec, desired, forbidden)
    p = model.provenance
    assert (p.spec_states, p.desired_states, p.forbidden_states) == (3, 3, 3)
    assert p.suite_states == len(model.suite.states) <= p.bound
    assert set(p.stages) == {"contracted_spec", "spec_complement", "forbidden_side", "desired_side"}
    assert p.stages["spec_complement"] == 4


def test_fault_model_language(counter_spec, desired, forbidden):
    suite = build_fault_model(counter_spec, desired, forbidden).suite
    otr_s = enumerate_otr(counter_spec, 6).words
    d, f = enumerate_vpa(desired, 6).words, enumerate_vpa(forbidden, 6).words
    assert enumerate_vpa(suite, 6).words == (d - otr_s) | (f & otr_s)


def test_fault_model_bound_on_random_instances():
    for i, rng in enumerate(rngs(53, 50)):
        spec = random_iovpts(rng, 2 + i % 2)
        d_aut = random_deterministic_vpa(rng, 2, ABX, n_stack=1)
        f_aut = random_deterministic_vpa(rng, 2, ABX, n_stack=1)
        model = build_fault_model(spec, d_aut, f_aut)
        assert model.provenance.suite_states <= suite_bound(len(spec.underlying.states), 2, 2)


def test_fault_model_is_deterministic_and_complete():
    for i, rng in enumerate(rngs(83, 30)):
        spec = random_iovpts(rng, 2 + i % 2)
        d_aut = random_deterministic_epsilon_vpa(rng, 2 + i % 2, ABX, n_stack=1)
        f_aut = random_deterministic_epsilon_vpa(rng, 2, ABX, n_stack=1)
        suite = build_fault_model(spec, d_aut, f_aut).suite
        assert is_deterministic(suite)
        assert not any(t.kind is Kind.EPSILON for t in suite.transitions)
        assert_non_blocking(suite, rng, count=20)


def test_fault_model_over_bound_is_an_error(counter_spec, desired, forbidden, monkeypatch):
    monkeypatch.setattr(conformance, "suite_bound", lambda n_s, n_d, n_f: 1)
    with pytest.raises(RuntimeError, match="above the bound 1"):
        build_fault_model(counter_spec, desired, forbidden)


###################################################################################################
# Contract errors
###################################################################################################

def test_nondeterministic_operand_is_rejected(counter_iut, counter_spec, forbidden):
    two_starts = make_vpa(ABX, ["p", "q"], ["p", "q"], [], [], ["q"])
    with pytest.raises(ContractError) as exc:
        check_conformance(counter_iut, counter_spec, two_starts, forbidden)
    assert exc.value.operand == "D"


def test_nondeterministic_spec_is_rejected(drinks):
    with pytest.raises(ContractError) as exc:
        build_fault_model(drinks, empty_vpa(drinks.alphabet), empty_vpa(drinks.alphabet))
    assert exc.value.operand == "spec"


def test_alphabet_mismatch_is_rejected(counter_iut, counter_spec, forbidden):
    with pytest.raises(ContractError):
        check_conformance(counter_iut, counter_spec, empty_vpa(AB), forbidden)


###################################################################################################
# Soundness / exhaustiveness
###################################################################################################

def test_verdicts_agree_with_bounded_evaluation():
    for i, rng in enumerate(rngs(59, 30)):
        spec = random_iovpts(rng, 2 + i % 2)
        iut = mutate(rng, spec)
        d_aut = random_deterministic_vpa(rng, 2, ABX, n_stack=1)
        f_aut = random_deterministic_vpa(rng, 2, ABX, n_stack=1)

        verdict = check_conformance(iut, spec, d_aut, f_aut)
        bounded = evaluate_conformance_bounded(iut, spec, d_aut, f_aut, 8)
        if verdict.passed:
            assert bounded is None
            continue
        w = verdict.witness
        suite = build_fault_model(spec, d_aut, f_aut).suite
        assert accepts(induced_vpa(iut), w)
        assert accepts(suite, w)
        if len(w) <= 8:
            assert bounded == w
        else:
            assert bounded is None
