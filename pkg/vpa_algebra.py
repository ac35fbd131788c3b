#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
vpa_algebra.py

[Goal]
- closure constructions over VPAs sharing one partitioned alphabet
  product / intersect / make_non_blocking / union / complement
- state-count bounds refer to the raw constructions below
  (prune_unreachable is applied only where a caller asks for it)

Pair states are spelled "(p,q)" and paired stack symbols "(Z1,Z2)".
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional

import networkx as nx

from errors import ContractError
from vpa_core import (
    ANY,
    BOTTOM,
    EPSILON,
    Kind,
    PartitionedAlphabet,
    Vpa,
    VpaTransition,
    collapse_epsilon_cycles,
    is_deterministic,
    remove_epsilon_moves,
    remove_epsilon_moves_deterministic,
)

logger = logging.getLogger(__name__)

# ----------------------------
# Config
# ----------------------------
SINK_STATE = "sink"
FRESH_STACK_SYMBOL = "_Z0_"


@dataclass(frozen=True)
class PairedStackSymbol:
    left: str
    right: str

    def __str__(self) -> str:
        return f"({self.left},{self.right})"


def pair_state(p: str, q: str) -> str:
    return f"({p},{q})"


def fresh_state(existing: Iterable[str], base: str = SINK_STATE) -> str:
    taken = set(existing)
    if base not in taken:
        return base
    i = 1
    while f"{base}_{i}" in taken:
        i += 1
    return f"{base}_{i}"


def require_same_alphabet(s: Vpa, q: Vpa, names: tuple = ("left", "right")) -> None:
    diffs = s.alphabet.differences(q.alphabet)
    if diffs:
        raise ContractError(f"alphabet mismatch between {names[0]} and {names[1]}: " + "; ".join(diffs))


# ----------------------------
# Product / intersection
# ----------------------------
def _paired_stack(t1: VpaTransition, t2: VpaTransition) -> Optional[str]:
    if t1.kind is Kind.PUSH:
        return str(PairedStackSymbol(t1.stack, t2.stack))
    if t1.kind is Kind.POP:
        if t1.stack == BOTTOM and t2.stack == BOTTOM:
            return BOTTOM
        if t1.stack == BOTTOM or t2.stack == BOTTOM:
            return None
        return str(PairedStackSymbol(t1.stack, t2.stack))
    return ANY


def product(s: Vpa, q: Vpa, finals: Optional[Iterable[str]] = None) -> Vpa:
    """Synchronous product; finals default to F x G."""
    require_same_alphabet(s, q)

    states = frozenset(pair_state(p, r) for p in s.states for r in q.states)
    stack = frozenset(str(PairedStackSymbol(z1, z2)) for z1 in s.stack_alphabet for z2 in q.stack_alphabet)

    q_by_label: Dict[str, List[VpaTransition]] = defaultdict(list)
    for t in q.transitions:
        if t.kind is not Kind.EPSILON:
            q_by_label[t.label].append(t)

    moves = set()
    for t1 in s.transitions:
        if t1.kind is Kind.EPSILON:
            for r in q.states:
                moves.add(VpaTransition(pair_state(t1.source, r), EPSILON, ANY, pair_state(t1.target, r), Kind.EPSILON))
            continue
        for t2 in q_by_label.get(t1.label, ()):
            if t2.kind is not t1.kind:
                continue
            z = _paired_stack(t1, t2)
            if z is None:
                continue
            moves.add(VpaTransition(pair_state(t1.source, t2.source), t1.label, z, pair_state(t1.target, t2.target), t1.kind))
    for t2 in q.transitions:
        if t2.kind is Kind.EPSILON:
            for p in s.states:
                moves.add(VpaTransition(pair_state(p, t2.source), EPSILON, ANY, pair_state(p, t2.target), Kind.EPSILON))

    if finals is None:
        finals = (pair_state(p, r) for p in s.finals for r in q.finals)

    logger.debug("product: %d x %d states -> %d states, %d transitions",
                 len(s.states), len(q.states), len(states), len(moves))
    return Vpa(
        alphabet=s.alphabet,
        states=states,
        initial=frozenset(pair_state(p, r) for p in s.initial for r in q.initial),
        stack_alphabet=stack,
        transitions=frozenset(moves),
        finals=frozenset(finals),
    )


def intersect(s: Vpa, q: Vpa) -> Vpa:
    return product(s, q)


def prune_unreachable(a: Vpa) -> Vpa:
    """Drop states the transition graph cannot reach from an initial state (language preserving)."""
    g = nx.DiGraph()
    g.add_nodes_from(a.states)
    g.add_edges_from((t.source, t.target) for t in a.transitions)
    keep = set(a.initial)
    for s in a.initial:
        keep |= nx.descendants(g, s)
    if keep == set(a.states):
        return a
    return a.with_changes(
        states=frozenset(keep),
        finals=a.finals & keep,
        transitions=frozenset(t for t in a.transitions if t.source in keep and t.target in keep),
    )


# ----------------------------
# Non-blocking completion
# ----------------------------
def make_non_blocking(a: Vpa, ensure_initial: bool = False) -> Vpa:
    """
    Route every missing move to a fresh sink that loops on everything.
    States with an epsilon move are left alone; epsilon cycles with no way out
    are merged first so that every silent closure ends in a completed state.
    With ensure_initial, an automaton without initial state gets the sink as
    its initial state.
    """
    a = collapse_epsilon_cycles(a, exitless_only=True)
    alphabet = a.alphabet
    z = min(a.stack_alphabet) if a.stack_alphabet else FRESH_STACK_SYMBOL
    sink = fresh_state(a.states)
    stack = a.stack_alphabet | ({z} if alphabet.calls else frozenset())
    pop_symbols = sorted(stack) + [BOTTOM]

    added: List[VpaTransition] = []
    for s in sorted(a.states):
        outs = a.outgoing(s)
        if any(t.kind is Kind.EPSILON for t in outs):
            continue
        seen = {(t.label, t.stack) for t in outs}
        seen_labels = {t.label for t in outs}
        for sym in sorted(alphabet.internals):
            if sym not in seen_labels:
                added.append(VpaTransition(s, sym, ANY, sink, Kind.SIMPLE))
        for sym in sorted(alphabet.calls):
            if sym not in seen_labels:
                added.append(VpaTransition(s, sym, z, sink, Kind.PUSH))
        for sym in sorted(alphabet.returns):
            for w in pop_symbols:
                if (sym, w) not in seen:
                    added.append(VpaTransition(s, sym, w, sink, Kind.POP))

    needs_initial = ensure_initial and not a.initial
    if not added and not needs_initial:
        return a

    loops = [VpaTransition(sink, sym, ANY, sink, Kind.SIMPLE) for sym in alphabet.internals]
    loops += [VpaTransition(sink, sym, z, sink, Kind.PUSH) for sym in alphabet.calls]
    loops += [
        VpaTransition(sink, sym, w, sink, Kind.POP)
        for sym in alphabet.returns
        for w in pop_symbols
    ]
    logger.debug("make_non_blocking: sink %r with %d completion moves", sink, len(added))
    return a.with_changes(
        states=a.states | {sink},
        initial=frozenset({sink}) if needs_initial else a.initial,
        stack_alphabet=stack,
        transitions=a.transitions | frozenset(added) | frozenset(loops),
    )


# ----------------------------
# Union / complement
# ----------------------------
def _without_epsilon(a: Vpa) -> Vpa:
    if is_deterministic(a):
        return remove_epsilon_moves_deterministic(a)
    return remove_epsilon_moves(a)


def union(s: Vpa, q: Vpa) -> Vpa:
    require_same_alphabet(s, q)
    s2 = make_non_blocking(_without_epsilon(s), ensure_initial=True)
    q2 = make_non_blocking(_without_epsilon(q), ensure_initial=True)
    finals = [
        pair_state(p, r)
        for p in s2.states
        for r in q2.states
        if p in s2.finals or r in q2.finals
    ]
    return product(s2, q2, finals=finals)


def complement(a: Vpa) -> Vpa:
    check = is_deterministic(a)
    if not check:
        raise ContractError(f"complement needs a deterministic automaton (condition {check.condition}: {check.message})")
    b = make_non_blocking(remove_epsilon_moves_deterministic(a), ensure_initial=True)
    return b.with_changes(finals=b.states - b.finals)


# ----------------------------
# Fixed languages
# ----------------------------
def universal_vpa(alphabet: PartitionedAlphabet) -> Vpa:
    """One state accepting every word over the alphabet."""
    u = "all"
    z = FRESH_STACK_SYMBOL
    moves = [VpaTransition(u, sym, ANY, u, Kind.SIMPLE) for sym in alphabet.internals]
    moves += [VpaTransition(u, sym, z, u, Kind.PUSH) for sym in alphabet.calls]
    moves += [VpaTransition(u, sym, w, u, Kind.POP) for sym in alphabet.returns for w in (z, BOTTOM)]
    return Vpa(
        alphabet=alphabet,
        states=frozenset({u}),
        initial=frozenset({u}),
        stack_alphabet=frozenset({z}),
        transitions=frozenset(moves),
        finals=frozenset({u}),
    )


def empty_vpa(alphabet: PartitionedAlphabet) -> Vpa:
    """One non-final state without moves."""
    return Vpa(
        alphabet=alphabet,
        states=frozenset({"none"}),
        initial=frozenset({"none"}),
        stack_alphabet=frozenset(),
        transitions=frozenset(),
        finals=frozenset(),
    )
