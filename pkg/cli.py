#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
cli.py

[Usage]
  python cli.py check SPEC IUT D F [--witness] [--max-oracle-len N] [--json]
  python cli.py complement VPA
  python cli.py contract VPTS
  python cli.py to-vpa VPTS
  python cli.py empty AUTOMATON
  python cli.py enumerate AUTOMATON [--max-len N]
  python cli.py member AUTOMATON WORD
  python cli.py validate AUTOMATON
  python cli.py intersect VPA VPA
  python cli.py union VPA VPA
  python cli.py suite SPEC D F

Words:
  witnesses print as one line, the empty word as "ε"; WORD accepts "ε" too
  enumerate prints one word per line, the empty word as an empty line

Exit codes:
  0  PASS / accept / success
  1  FAIL / reject
  2  input, contract or configuration error

Optional env:
  VPCONF_ORACLE_LEN=6        # default bound for enumerate and check's oracle line
  VPCONF_LOG_LEVEL=WARNING   # diagnostics on stderr
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from typing import Callable, Dict, List, Optional, Sequence

import settings
from automaton_io import Automaton, load_document, serialize, violations_of
from conformance import build_fault_model, check_conformance, evaluate_conformance_bounded, is_empty_with_witness
from errors import ContractError, DocumentError, VpaError
from oracle import enumerate_otr, enumerate_vpa
from vpa_algebra import complement, intersect, prune_unreachable, union
from vpa_core import PartitionedAlphabet, Vpa, Word, accepts, run_of
from vpts_core import AnyVpts, contract, induced_vpa

logger = logging.getLogger("cli")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

EMPTY_WORD = "ε"


# ----------------------------
# Helpers
# ----------------------------
def format_word(word: Sequence[str]) -> str:
    if all(len(sym) == 1 for sym in word):
        return "".join(word)
    return " ".join(word)


def format_witness(word: Sequence[str]) -> str:
    """Like format_word, but the empty word reads as EMPTY_WORD."""
    return format_word(word) or EMPTY_WORD


def parse_word(text: str, alphabet: PartitionedAlphabet) -> Word:
    if text.strip() == EMPTY_WORD:
        return ()
    tokens = [tok for tok in re.split(r"[\s,]+", text.strip()) if tok]
    if len(tokens) == 1 and tokens[0] not in alphabet.symbols:
        return tuple(tokens[0])
    return tuple(tokens)


def _vpa(obj: Automaton, path: str) -> Vpa:
    if not isinstance(obj, Vpa):
        raise DocumentError(path, "kind", "expected a vpa document")
    return obj


def _vpts(obj: Automaton, path: str) -> AnyVpts:
    if isinstance(obj, Vpa):
        raise DocumentError(path, "kind", "expected a vpts or iovpts document")
    return obj


def _as_vpa(obj: Automaton) -> Vpa:
    return obj if isinstance(obj, Vpa) else induced_vpa(obj)


def _emit(text: str) -> None:
    sys.stdout.write(text)


# ----------------------------
# Commands
# ----------------------------
def cmd_check(args: argparse.Namespace) -> int:
    paths = {"spec": args.spec, "iut": args.iut, "D": args.desired, "F": args.forbidden}
    spec = _vpts(load_document(args.spec), args.spec)
    iut = _vpts(load_document(args.iut), args.iut)
    d_aut = _vpa(load_document(args.desired), args.desired)
    f_aut = _vpa(load_document(args.forbidden), args.forbidden)

    try:
        verdict = check_conformance(iut, spec, d_aut, f_aut)
    except ContractError as e:
        raise DocumentError(paths.get(e.operand or "", args.iut), "contract", str(e)) from e

    max_len = args.max_oracle_len if args.max_oracle_len is not None else settings.oracle_len()
    bounded = evaluate_conformance_bounded(iut, spec, d_aut, f_aut, max_len)
    if verdict.passed or len(verdict.witness) > max_len:
        consistent = bounded is None
    else:
        consistent = bounded == verdict.witness
    if not consistent:
        logger.error("verdict and bounded oracle disagree (oracle word: %r)", bounded)

    if args.json:
        report = verdict.to_dict()
        report["oracle"] = {"maxLen": max_len, "consistent": consistent}
        _emit(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
        return EXIT_OK if verdict.passed else EXIT_FAIL

    lines = [verdict.outcome.value]
    if not verdict.passed:
        lines.append(f"witness: {format_witness(verdict.witness)}")
        lines.append(f"clause: {verdict.clause.value}")
        if args.witness:
            lines.append("run:")
            for t, c in run_of(induced_vpa(iut), verdict.witness):
                lines.append(f"  {c}" if t is None else f"  {t.label} [{t}] {c}")
    lines.append(f"oracle: {'consistent' if consistent else 'MISMATCH'} up to length {max_len}")
    _emit("\n".join(lines) + "\n")
    return EXIT_OK if verdict.passed else EXIT_FAIL


def cmd_complement(args: argparse.Namespace) -> int:
    a = _vpa(load_document(args.path), args.path)
    try:
        result = complement(a)
    except ContractError as e:
        raise DocumentError(args.path, "contract", str(e)) from e
    _emit(serialize(result))
    return EXIT_OK


def cmd_contract(args: argparse.Namespace) -> int:
    v = _vpts(load_document(args.path), args.path)
    _emit(serialize(contract(v)))
    return EXIT_OK


def cmd_to_vpa(args: argparse.Namespace) -> int:
    v = _vpts(load_document(args.path), args.path)
    _emit(serialize(induced_vpa(v)))
    return EXIT_OK


def cmd_empty(args: argparse.Namespace) -> int:
    a = _as_vpa(load_document(args.path))
    result = is_empty_with_witness(a)
    _emit(("EMPTY" if result.empty else format_witness(result.witness)) + "\n")
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    obj = load_document(args.path)
    max_len = args.max_len if args.max_len is not None else settings.oracle_len()
    if isinstance(obj, Vpa):
        lang = enumerate_vpa(obj, max_len, source=args.path)
    else:
        lang = enumerate_otr(obj, max_len, source=args.path)
    _emit("".join(format_word(w) + "\n" for w in lang))
    return EXIT_OK


def cmd_member(args: argparse.Namespace) -> int:
    a = _as_vpa(load_document(args.path))
    ok = accepts(a, parse_word(args.word, a.alphabet))
    _emit(("accept" if ok else "reject") + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_validate(args: argparse.Namespace) -> int:
    problems = violations_of(load_document(args.path, check=False))
    if not problems:
        _emit("OK\n")
        return EXIT_OK
    _emit("".join(p + "\n" for p in problems))
    return EXIT_ERROR


def _binary(op: Callable[[Vpa, Vpa], Vpa]) -> Callable[[argparse.Namespace], int]:
    def run(args: argparse.Namespace) -> int:
        left = _vpa(load_document(args.left), args.left)
        right = _vpa(load_document(args.right), args.right)
        try:
            result = op(left, right)
        except ContractError as e:
            raise DocumentError(args.right, "contract", str(e)) from e
        _emit(serialize(prune_unreachable(result)))
        return EXIT_OK
    return run


def cmd_suite(args: argparse.Namespace) -> int:
    paths = {"spec": args.spec, "D": args.desired, "F": args.forbidden}
    spec = _vpts(load_document(args.spec), args.spec)
    d_aut = _vpa(load_document(args.desired), args.desired)
    f_aut = _vpa(load_document(args.forbidden), args.forbidden)
    try:
        model = build_fault_model(spec, d_aut, f_aut)
    except ContractError as e:
        raise DocumentError(paths.get(e.operand or "", args.spec), "contract", str(e)) from e
    logger.info("suite: %d raw states, bound %d", model.provenance.suite_states, model.provenance.bound)
    _emit(serialize(prune_unreachable(model.suite)))
    return EXIT_OK


# ----------------------------
# Args
# ----------------------------
def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="vpconf",
        description="Visibly pushdown automata and (D,F)-visible conformance checking.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="Decide conformance of IUT against SPEC for desired D / forbidden F.")
    p.add_argument("spec")
    p.add_argument("iut")
    p.add_argument("desired", metavar="D")
    p.add_argument("forbidden", metavar="F")
    p.add_argument("--witness", action="store_true", help="Print the IUT run along the witness.")
    p.add_argument("--max-oracle-len", type=int, default=None, help="Bound of the oracle cross-check.")
    p.add_argument("--json", action="store_true", help="Print the verdict as JSON.")
    p.set_defaults(func=cmd_check)

    unary: Dict[str, tuple] = {
        "complement": (cmd_complement, "Complement a deterministic VPA."),
        "contract": (cmd_contract, "Drop pop transitions no trace can fire."),
        "to-vpa": (cmd_to_vpa, "Induced VPA of a VPTS (all states final)."),
        "empty": (cmd_empty, "Print EMPTY or the shortest accepted word."),
        "validate": (cmd_validate, "List well-formedness violations."),
    }
    for name, (func, help_text) in unary.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("path")
        p.set_defaults(func=func)

    p = sub.add_parser("enumerate", help="All accepted / observable words up to a length.")
    p.add_argument("path")
    p.add_argument("--max-len", type=int, default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("member", help="Exit 0 if WORD is accepted, 1 otherwise.")
    p.add_argument("path")
    p.add_argument("word")
    p.set_defaults(func=cmd_member)

    for name, op in (("intersect", intersect), ("union", union)):
        p = sub.add_parser(name, help=f"{name.capitalize()} of two VPAs.")
        p.add_argument("left")
        p.add_argument("right")
        p.set_defaults(func=_binary(op))

    p = sub.add_parser("suite", help="Print the fault-model automaton.")
    p.add_argument("spec")
    p.add_argument("desired", metavar="D")
    p.add_argument("forbidden", metavar="F")
    p.set_defaults(func=cmd_suite)

    return parser.parse_args(argv)


# ----------------------------
# Main
# ----------------------------
def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    try:
        logging.basicConfig(
            level=settings.log_level(),
            format="[%(levelname)s] %(name)s: %(message)s",
            stream=sys.stderr,
        )
        for name in ("max_len", "max_oracle_len"):
            value = getattr(args, name, None)
            if value is not None and value < 0:
                raise RuntimeError(f"--{name.replace('_', '-')} must be >= 0")
        return args.func(args)
    except DocumentError as e:
        print(f"error: {e}", file=sys.stderr)
    except (VpaError, RuntimeError) as e:
        print(f"error: -: {e}", file=sys.stderr)
    except OSError as e:
        print(f"error: {e.filename or '-'}: {e.strerror or e}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
