#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
generators.py

[Goal]
- seeded random automata for the property suites
- deterministic / non-deterministic VPAs (optionally with epsilon moves)
- VPTS / IOVPTS with every state reachable through a push chain
- dead pop injection and single-edit mutants of a specification

All generators take a numpy Generator (np.random.default_rng(seed)) so a seed
list reproduces the same instances on every run.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, List, Optional, Set, Tuple

import numpy as np

from vpa_core import ANY, BOTTOM, EPSILON, TAU, Kind, PartitionedAlphabet, Vpa, VpaTransition
from vpts_core import AnyVpts, Iovpts, Vpts, is_deterministic_vpts, vpts_of

# ----------------------------
# Config (defaults)
# ----------------------------
DEFAULT_DENSITY = 0.5
DEFAULT_EPSILON_RATE = 0.3
DEAD_STACK_SYMBOL = "D"

IO_ALPHABET = PartitionedAlphabet.of(calls=["a"], returns=["b", "x"])
IO_INPUTS = frozenset({"a", "b"})
IO_OUTPUTS = frozenset({"x"})


def state_names(n: int, prefix: str = "q") -> List[str]:
    return [f"{prefix}{i}" for i in range(n)]


def stack_names(n: int) -> List[str]:
    return [chr(ord("A") + i) for i in range(n)]


def _pick(rng: np.random.Generator, items) -> str:
    items = sorted(items)
    return items[int(rng.integers(len(items)))]


def _labelled_moves(
    rng: np.random.Generator,
    sources: List[str],
    targets: List[str],
    alphabet: PartitionedAlphabet,
    stack: List[str],
    density: float,
) -> Set[VpaTransition]:
    """At most one move per (state, call) and per (state, return/internal, stack)."""
    moves: Set[VpaTransition] = set()
    for s in sources:
        for sym in sorted(alphabet.calls):
            if stack and rng.random() < density:
                moves.add(VpaTransition(s, sym, _pick(rng, stack), _pick(rng, targets), Kind.PUSH))
        for sym in sorted(alphabet.returns):
            for w in stack + [BOTTOM]:
                if rng.random() < density:
                    moves.add(VpaTransition(s, sym, w, _pick(rng, targets), Kind.POP))
        for sym in sorted(alphabet.internals):
            if rng.random() < density:
                moves.add(VpaTransition(s, sym, ANY, _pick(rng, targets), Kind.SIMPLE))
    return moves


def _finals(rng: np.random.Generator, states: List[str], rate: float = 0.4) -> FrozenSet[str]:
    return frozenset(s for s in states if rng.random() < rate)


# ----------------------------
# VPA
# ----------------------------
def random_deterministic_vpa(
    rng: np.random.Generator,
    n_states: int,
    alphabet: PartitionedAlphabet,
    n_stack: int = 2,
    density: float = DEFAULT_DENSITY,
) -> Vpa:
    states = state_names(n_states)
    stack = stack_names(n_stack)
    return Vpa(
        alphabet=alphabet,
        states=frozenset(states),
        initial=frozenset({states[0]}),
        stack_alphabet=frozenset(stack),
        transitions=frozenset(_labelled_moves(rng, states, states, alphabet, stack, density)),
        finals=_finals(rng, states),
    )


def random_vpa(
    rng: np.random.Generator,
    n_states: int,
    alphabet: PartitionedAlphabet,
    n_stack: int = 2,
    n_moves: Optional[int] = None,
    epsilon_rate: float = DEFAULT_EPSILON_RATE,
) -> Vpa:
    """Non-deterministic VPA; roughly epsilon_rate * n_states epsilon edges injected."""
    states = state_names(n_states)
    stack = stack_names(n_stack)
    if n_moves is None:
        n_moves = 2 * n_states * len(alphabet.symbols)
    moves: Set[VpaTransition] = set()
    for _ in range(n_moves):
        s, sym, t = _pick(rng, states), _pick(rng, alphabet.symbols), _pick(rng, states)
        kind = alphabet.kind_of(sym)
        if kind is Kind.PUSH:
            moves.add(VpaTransition(s, sym, _pick(rng, stack), t, kind))
        elif kind is Kind.POP:
            moves.add(VpaTransition(s, sym, _pick(rng, stack + [BOTTOM]), t, kind))
        else:
            moves.add(VpaTransition(s, sym, ANY, t, Kind.SIMPLE))
    for _ in range(max(1, round(epsilon_rate * n_states))):
        moves.add(VpaTransition(_pick(rng, states), EPSILON, ANY, _pick(rng, states), Kind.EPSILON))
    n_initial = 1 + int(rng.integers(min(2, n_states)))
    return Vpa(
        alphabet=alphabet,
        states=frozenset(states),
        initial=frozenset(states[:n_initial]),
        stack_alphabet=frozenset(stack),
        transitions=frozenset(moves),
        finals=_finals(rng, states),
    )


def random_deterministic_epsilon_vpa(
    rng: np.random.Generator,
    n_states: int,
    alphabet: PartitionedAlphabet,
    n_stack: int = 2,
    density: float = DEFAULT_DENSITY,
    epsilon_rate: float = DEFAULT_EPSILON_RATE,
) -> Vpa:
    """Deterministic VPA where some states carry exactly one epsilon move and nothing else."""
    states = state_names(n_states)
    stack = stack_names(n_stack)
    silent = [s for s in states if rng.random() < epsilon_rate] or [_pick(rng, states)]
    loud = [s for s in states if s not in silent]
    moves = _labelled_moves(rng, loud, states, alphabet, stack, density)
    moves |= {VpaTransition(s, EPSILON, ANY, _pick(rng, states), Kind.EPSILON) for s in silent}
    return Vpa(
        alphabet=alphabet,
        states=frozenset(states),
        initial=frozenset({states[0]}),
        stack_alphabet=frozenset(stack),
        transitions=frozenset(moves),
        finals=_finals(rng, states),
    )


# ----------------------------
# VPTS
# ----------------------------
def random_vpts(
    rng: np.random.Generator,
    n_states: int,
    alphabet: PartitionedAlphabet,
    n_stack: int = 2,
    density: float = DEFAULT_DENSITY,
    deterministic: bool = True,
) -> Vpts:
    """
    q0 -c-> q1 -c-> ... is a push chain so every state is reachable.
    Internal moves (never self-loops) only in non-deterministic mode.
    """
    states = state_names(n_states)
    stack = stack_names(n_stack)
    if not alphabet.calls:
        raise ValueError("random_vpts needs at least one call symbol for the reachability chain")
    chain_call = min(alphabet.calls)

    moves: Set[VpaTransition] = set()
    for i in range(1, n_states):
        moves.add(VpaTransition(states[i - 1], chain_call, _pick(rng, stack), states[i], Kind.PUSH))
    taken = {(t.source, t.label) for t in moves}
    for t in _labelled_moves(rng, states, states, alphabet, stack, density):
        if t.kind is Kind.PUSH and (t.source, t.label) in taken:
            continue
        moves.add(t)

    if not deterministic:
        for s in states:
            if rng.random() < DEFAULT_EPSILON_RATE:
                others = [q for q in states if q != s]
                if others:
                    moves.add(VpaTransition(s, TAU, ANY, _pick(rng, others), Kind.INTERNAL))
        for _ in range(n_states):
            extra = _labelled_moves(rng, [_pick(rng, states)], states, alphabet, stack, density / 2)
            moves |= extra

    return Vpts(
        alphabet=alphabet,
        states=frozenset(states),
        initial=frozenset({states[0]}),
        stack_alphabet=frozenset(stack),
        transitions=frozenset(moves),
    )


def random_iovpts(
    rng: np.random.Generator,
    n_states: int,
    n_stack: int = 1,
    density: float = DEFAULT_DENSITY,
    deterministic: bool = True,
) -> Iovpts:
    underlying = random_vpts(rng, n_states, IO_ALPHABET, n_stack, density, deterministic)
    return Iovpts(underlying, IO_INPUTS, IO_OUTPUTS)


def inject_dead_pops(
    rng: np.random.Generator,
    v: Vpts,
    count: int = 2,
) -> Tuple[Vpts, FrozenSet[VpaTransition]]:
    """Pops on a stack symbol no push ever writes; none of them can fire."""
    dead = DEAD_STACK_SYMBOL
    while dead in v.stack_alphabet:
        dead += "'"
    states = sorted(v.states)
    returns = sorted(v.alphabet.returns)
    if not returns:
        return v, frozenset()
    injected = {
        VpaTransition(_pick(rng, states), _pick(rng, returns), dead, _pick(rng, states), Kind.POP)
        for _ in range(count)
    }
    # one move per (source, label, stack)
    unique: Dict[Tuple[str, str], VpaTransition] = {}
    for t in sorted(injected):
        unique.setdefault((t.source, t.label), t)
    injected = set(unique.values())
    out = v.with_changes(
        stack_alphabet=v.stack_alphabet | {dead},
        transitions=v.transitions | frozenset(injected),
    )
    return out, frozenset(injected)


# ----------------------------
# Mutants
# ----------------------------
def _edit(rng: np.random.Generator, v: Vpts) -> Vpts:
    moves = sorted(v.transitions)
    states = sorted(v.states)
    op = int(rng.integers(3))
    if op == 0 and moves:
        victim = moves[int(rng.integers(len(moves)))]
        changed = VpaTransition(victim.source, victim.label, victim.stack, _pick(rng, states), victim.kind)
        return v.with_changes(transitions=(v.transitions - {victim}) | {changed})
    if op == 1 and len(moves) > 1:
        victim = moves[int(rng.integers(len(moves)))]
        return v.with_changes(transitions=v.transitions - {victim})
    extra = _labelled_moves(rng, [_pick(rng, states)], states, v.alphabet, sorted(v.stack_alphabet), DEFAULT_DENSITY)
    return v.with_changes(transitions=v.transitions | frozenset(extra))


def mutate(rng: np.random.Generator, spec: AnyVpts, attempts: int = 20) -> AnyVpts:
    """One random edit (retarget / drop / add) that keeps the result deterministic."""
    base = vpts_of(spec)
    for _ in range(attempts):
        candidate = _edit(rng, base)
        if candidate.transitions != base.transitions and is_deterministic_vpts(candidate):
            break
    else:
        candidate = base
    if isinstance(spec, Iovpts):
        return Iovpts(candidate, spec.inputs, spec.outputs)
    return candidate
