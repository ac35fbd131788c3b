#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
conformance.py

[Goal]
- fault model  T = (D ∩ complement(otr(S))) ∪ (F ∩ otr(S))  as one deterministic VPA
- emptiness with shortest witness (grammar route, see vpts_core)
- verdict for an implementation I:  PASS  <=>  otr(I) ∩ T = ∅

Inputs:
  spec  deterministic IOVPTS (or VPTS)
  iut   deterministic VPTS / IOVPTS
  D, F  deterministic VPAs over the same partitioned alphabet
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional

from errors import ContractError
from oracle import enumerate_otr, word_order
from vpa_algebra import complement, intersect, prune_unreachable, require_same_alphabet, union
from vpa_core import Vpa, Word, accepts, is_deterministic
from vpts_core import (
    AnyVpts,
    contract,
    grammar_for_vpa,
    induced_vpa,
    is_deterministic_vpts,
    leftmost_distances,
    shortest_yields,
    vpts_of,
)

logger = logging.getLogger(__name__)


class Outcome(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"


class Clause(str, Enum):
    DESIRED_MISSING = "DesiredMissing"
    FORBIDDEN_PRESENT = "ForbiddenPresent"


@dataclass(frozen=True)
class FaultModelProvenance:
    spec_states: int
    desired_states: int
    forbidden_states: int
    bound: int                    # (nS*nF+1)(nS*nD+nD+1)
    suite_states: int             # raw construction, before pruning
    stages: Dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class FaultModel:
    suite: Vpa
    provenance: FaultModelProvenance


@dataclass(frozen=True)
class EmptinessResult:
    empty: bool
    witness: Optional[Word] = None


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    witness: Optional[Word] = None
    clause: Optional[Clause] = None
    desired_missing: bool = False
    forbidden_present: bool = False
    suite_states: int = 0
    bound: int = 0
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.outcome is Outcome.PASS

    def to_dict(self) -> Dict:
        return {
            "outcome": self.outcome.value,
            "witness": list(self.witness) if self.witness is not None else None,
            "clause": self.clause.value if self.clause is not None else None,
            "desiredMissing": self.desired_missing,
            "forbiddenPresent": self.forbidden_present,
            "suiteStates": self.suite_states,
            "bound": self.bound,
            "timings": {k: round(v, 6) for k, v in self.timings.items()},
        }


def suite_bound(n_s: int, n_d: int, n_f: int) -> int:
    return (n_s * n_f + 1) * (n_s * n_d + n_d + 1)


# ----------------------------
# Fault model
# ----------------------------
def _require_deterministic(a: Vpa, operand: str) -> None:
    check = is_deterministic(a)
    if not check:
        raise ContractError(f"automaton is not deterministic (condition {check.condition}: {check.message})", operand)


def build_fault_model(spec: AnyVpts, d_aut: Vpa, f_aut: Vpa) -> FaultModel:
    s = vpts_of(spec)
    if not is_deterministic_vpts(s):
        raise ContractError("specification is not deterministic", "spec")
    _require_deterministic(d_aut, "D")
    _require_deterministic(f_aut, "F")

    a1 = induced_vpa(contract(s))
    require_same_alphabet(a1, d_aut, ("spec", "D"))
    require_same_alphabet(a1, f_aut, ("spec", "F"))

    b1 = complement(a1)
    a2 = intersect(f_aut, a1)
    b2 = intersect(d_aut, b1)
    suite = union(a2, b2)

    bound = suite_bound(len(s.states), len(d_aut.states), len(f_aut.states))
    if len(suite.states) > bound:
        raise RuntimeError(f"fault model has {len(suite.states)} states, above the bound {bound}")
    provenance = FaultModelProvenance(
        spec_states=len(s.states),
        desired_states=len(d_aut.states),
        forbidden_states=len(f_aut.states),
        bound=bound,
        suite_states=len(suite.states),
        stages={
            "contracted_spec": len(a1.states),
            "spec_complement": len(b1.states),
            "forbidden_side": len(a2.states),
            "desired_side": len(b2.states),
        },
    )
    logger.debug("fault model: %d states (bound %d)", len(suite.states), bound)
    return FaultModel(suite=suite, provenance=provenance)


# ----------------------------
# Emptiness
# ----------------------------
def is_empty_with_witness(a: Vpa) -> EmptinessResult:
    """
    L(a) is non-empty iff some leftmost-reachable grammar nonterminal sits on a
    final state; the witness is the least (length, word) prefix reaching one.
    """
    b = prune_unreachable(a)
    if not b.finals or not b.initial:
        return EmptinessResult(True)
    g = grammar_for_vpa(b)
    dist = leftmost_distances(g, shortest_yields(g))
    best: Optional[Word] = None
    for x, w in dist.items():
        if x.state in b.finals and (best is None or word_order(w) < word_order(best)):
            best = w
    if best is None:
        return EmptinessResult(True)
    return EmptinessResult(False, best)


# ----------------------------
# Verdict
# ----------------------------
def check_conformance(iut: AnyVpts, spec: AnyVpts, d_aut: Vpa, f_aut: Vpa) -> Verdict:
    timings: Dict[str, float] = {}
    t0 = time.perf_counter()

    i = vpts_of(iut)
    if not is_deterministic_vpts(i):
        raise ContractError("implementation is not deterministic", "iut")
    diffs = i.alphabet.differences(vpts_of(spec).alphabet)
    if diffs:
        raise ContractError("alphabet mismatch with spec: " + "; ".join(diffs), "iut")

    model = build_fault_model(spec, d_aut, f_aut)
    t1 = time.perf_counter()
    timings["fault_model"] = t1 - t0

    product = intersect(induced_vpa(contract(i)), model.suite)
    result = is_empty_with_witness(product)
    t2 = time.perf_counter()
    timings["emptiness"] = t2 - t1

    base = dict(suite_states=model.provenance.suite_states, bound=model.provenance.bound)
    if result.empty:
        timings["total"] = t2 - t0
        return Verdict(Outcome.PASS, timings=timings, **base)

    w = result.witness
    in_spec = accepts(induced_vpa(spec), w)
    desired_missing = accepts(d_aut, w) and not in_spec
    forbidden_present = accepts(f_aut, w) and in_spec
    if not (desired_missing or forbidden_present):
        logger.error("witness %r matches neither clause", w)
    clause = Clause.DESIRED_MISSING if desired_missing else Clause.FORBIDDEN_PRESENT
    timings["total"] = time.perf_counter() - t0
    return Verdict(
        Outcome.FAIL,
        witness=w,
        clause=clause,
        desired_missing=desired_missing,
        forbidden_present=forbidden_present,
        timings=timings,
        **base,
    )


def passes_suite(iut: AnyVpts, suite: Vpa, max_len: int) -> bool:
    i = vpts_of(iut)
    diffs = i.alphabet.differences(suite.alphabet)
    if diffs:
        raise ContractError("alphabet mismatch with suite: " + "; ".join(diffs), "iut")
    return not any(accepts(suite, w) for w in enumerate_otr(i, max_len))


def evaluate_conformance_bounded(
    iut: AnyVpts, spec: AnyVpts, d_aut: Vpa, f_aut: Vpa, max_len: int
) -> Optional[Word]:
    """
    Both conformance clauses checked word by word on otr(iut) up to max_len:
      w in F and in otr(spec)      -> violation
      w in D and not in otr(spec)  -> violation
    Returns the least violating word, or None.
    """
    spec_vpa = induced_vpa(spec)
    for w in enumerate_otr(iut, max_len):
        in_spec = accepts(spec_vpa, w)
        if in_spec and accepts(f_aut, w):
            return w
        if not in_spec and accepts(d_aut, w):
            return w
    return None
