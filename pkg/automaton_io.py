#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
automaton_io.py

JSON interchange format (UTF-8):

{
  "kind": "vpa" | "vpts" | "iovpts",
  "alphabet": {"calls": [...], "returns": [...], "internals": [...]},
  "io": {"inputs": [...], "outputs": [...]},          # iovpts only
  "states": [...], "initial": [...], "stack": [...],
  "finals": [...],                                     # vpa only
  "transitions": [{"from": "s0", "label": "a", "stack": "A", "to": "s1"}, ...]
}

Reserved spellings: _EPS_ / _TAU_ labels, _BOTTOM_ / _ANY_ stack entries.
Transition kinds are inferred from the alphabet partition.
Serialization is canonical: every list sorted, fixed key order, 2-space indent.
"""

from __future__ import annotations

import json
from typing import Any, Dict, List, Union

from errors import DocumentError
from vpa_core import PartitionedAlphabet, Vpa, VpaTransition, as_transition, validate
from vpts_core import Iovpts, Vpts, validate_iovpts, validate_vpts

Automaton = Union[Vpa, Vpts, Iovpts]

DOC_KINDS = ("vpa", "vpts", "iovpts")
TRANSITION_KEYS = ("from", "label", "stack", "to")


# ----------------------------
# Parse
# ----------------------------
def _string_list(doc: Dict[str, Any], key: str, source: str, locus: str = "") -> List[str]:
    where = f"{locus}{key}"
    if key not in doc:
        raise DocumentError(source, where, "missing key")
    value = doc[key]
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise DocumentError(source, where, "expected a list of strings")
    return value


def _transitions(doc: Dict[str, Any], alphabet: PartitionedAlphabet, source: str) -> List[VpaTransition]:
    raw = doc.get("transitions")
    if not isinstance(raw, list):
        raise DocumentError(source, "transitions", "expected a list")
    out: List[VpaTransition] = []
    for i, item in enumerate(raw):
        where = f"transitions[{i}]"
        if not isinstance(item, dict):
            raise DocumentError(source, where, "expected an object")
        missing = [k for k in TRANSITION_KEYS if not isinstance(item.get(k), str)]
        if missing:
            raise DocumentError(source, where, f"missing or non-string keys: {', '.join(missing)}")
        out.append(as_transition(alphabet, (item["from"], item["label"], item["stack"], item["to"])))
    return out


def violations_of(obj: Automaton) -> List[str]:
    if isinstance(obj, Vpa):
        return validate(obj)
    if isinstance(obj, Iovpts):
        return validate_iovpts(obj)
    return validate_vpts(obj)


def parse_document(text: str, source: str = "<string>", check: bool = True) -> Automaton:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(source, f"line {e.lineno} column {e.colno}", f"malformed JSON: {e.msg}") from e
    if not isinstance(doc, dict):
        raise DocumentError(source, "$", "expected a JSON object")

    kind = doc.get("kind")
    if kind not in DOC_KINDS:
        raise DocumentError(source, "kind", f"expected one of {', '.join(DOC_KINDS)}, got {kind!r}")

    alpha_doc = doc.get("alphabet")
    if not isinstance(alpha_doc, dict):
        raise DocumentError(source, "alphabet", "expected an object")
    alphabet = PartitionedAlphabet.of(
        _string_list(alpha_doc, "calls", source, "alphabet."),
        _string_list(alpha_doc, "returns", source, "alphabet."),
        _string_list(alpha_doc, "internals", source, "alphabet.") if "internals" in alpha_doc else (),
    )
    states = frozenset(_string_list(doc, "states", source))
    initial = frozenset(_string_list(doc, "initial", source))
    stack = frozenset(_string_list(doc, "stack", source))
    transitions = frozenset(_transitions(doc, alphabet, source))

    obj: Automaton
    if kind == "vpa":
        obj = Vpa(alphabet, states, initial, stack, transitions, frozenset(_string_list(doc, "finals", source)))
    else:
        if "finals" in doc:
            raise DocumentError(source, "finals", f"not allowed for kind {kind}")
        obj = Vpts(alphabet, states, initial, stack, transitions)
        if kind == "iovpts":
            io = doc.get("io")
            if not isinstance(io, dict):
                raise DocumentError(source, "io", "expected an object with inputs/outputs")
            obj = Iovpts(
                obj,
                frozenset(_string_list(io, "inputs", source, "io.")),
                frozenset(_string_list(io, "outputs", source, "io.")),
            )

    if check:
        problems = violations_of(obj)
        if problems:
            locus, _, first = problems[0].partition(": ")
            message = first if len(problems) == 1 else "; ".join(problems)
            raise DocumentError(source, locus, message, problems)
    return obj


def load_document(path: str, check: bool = True) -> Automaton:
    with open(path, "r", encoding="utf-8") as f:
        return parse_document(f.read(), source=path, check=check)


# ----------------------------
# Serialize
# ----------------------------
def kind_of(obj: Automaton) -> str:
    if isinstance(obj, Vpa):
        return "vpa"
    if isinstance(obj, Iovpts):
        return "iovpts"
    return "vpts"


def to_document(obj: Automaton) -> Dict[str, Any]:
    base = obj.underlying if isinstance(obj, Iovpts) else obj
    doc: Dict[str, Any] = {
        "kind": kind_of(obj),
        "alphabet": {
            "calls": sorted(base.alphabet.calls),
            "returns": sorted(base.alphabet.returns),
            "internals": sorted(base.alphabet.internals),
        },
    }
    if isinstance(obj, Iovpts):
        doc["io"] = {"inputs": sorted(obj.inputs), "outputs": sorted(obj.outputs)}
    doc["states"] = sorted(base.states)
    doc["initial"] = sorted(base.initial)
    doc["stack"] = sorted(base.stack_alphabet)
    if isinstance(obj, Vpa):
        doc["finals"] = sorted(obj.finals)
    doc["transitions"] = [
        {"from": t.source, "label": t.label, "stack": t.stack, "to": t.target}
        for t in sorted(base.transitions, key=lambda t: (t.source, t.label, t.stack, t.target))
    ]
    return doc


def serialize(obj: Automaton) -> str:
    return json.dumps(to_document(obj), indent=2, ensure_ascii=False) + "\n"
