#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
vpa_core.py

[Goal]
- Visibly pushdown automaton (VPA) data model
- move semantics: single step, configuration sets after a word, membership
- determinism check (first violating pair reported)
- epsilon-move elimination (general + determinism preserving)

Stack discipline is dictated by the label:
  call     -> push one symbol of the stack alphabet
  return   -> pop the given symbol, or pop _BOTTOM_ (only on empty stack, stack unchanged)
  internal -> stack untouched (_ANY_)
  _EPS_    -> silent move, stack untouched
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from errors import ContractError, InputSymbolError, StepRejected

logger = logging.getLogger(__name__)

# ----------------------------
# Reserved spellings
# ----------------------------
BOTTOM = "_BOTTOM_"   # pop on empty stack
ANY = "_ANY_"         # stack placeholder of simple / silent moves
EPSILON = "_EPS_"     # silent move of a VPA
TAU = "_TAU_"         # internal action of a VPTS
RESERVED = frozenset({BOTTOM, ANY, EPSILON, TAU})

Word = Tuple[str, ...]


class Kind(str, Enum):
    PUSH = "push"
    POP = "pop"
    SIMPLE = "simple"
    EPSILON = "epsilon"
    INTERNAL = "internal"  # VPTS only


# ----------------------------
# Data model
# ----------------------------
@dataclass(frozen=True)
class PartitionedAlphabet:
    calls: FrozenSet[str]
    returns: FrozenSet[str]
    internals: FrozenSet[str] = frozenset()

    @classmethod
    def of(cls, calls: Iterable[str] = (), returns: Iterable[str] = (), internals: Iterable[str] = ()) -> "PartitionedAlphabet":
        return cls(frozenset(calls), frozenset(returns), frozenset(internals))

    @cached_property
    def symbols(self) -> Tuple[str, ...]:
        """Canonical symbol order (plain string order); used for every tie-break."""
        return tuple(sorted(self.calls | self.returns | self.internals))

    def kind_of(self, symbol: str) -> Optional[Kind]:
        if symbol in self.calls:
            return Kind.PUSH
        if symbol in self.returns:
            return Kind.POP
        if symbol in self.internals:
            return Kind.SIMPLE
        return None

    def violations(self) -> List[str]:
        out: List[str] = []
        parts = (("calls", self.calls), ("returns", self.returns), ("internals", self.internals))
        for i, (n1, s1) in enumerate(parts):
            for n2, s2 in parts[i + 1:]:
                for sym in sorted(s1 & s2):
                    out.append(f"alphabet: symbol {sym!r} is in both {n1} and {n2}")
        for name, syms in parts:
            for sym in sorted(syms & RESERVED):
                out.append(f"alphabet: reserved symbol {sym!r} used in {name}")
        if not self.symbols:
            out.append("alphabet: calls, returns and internals are all empty")
        return out

    def differences(self, other: "PartitionedAlphabet") -> List[str]:
        out: List[str] = []
        for name in ("calls", "returns", "internals"):
            mine, theirs = getattr(self, name), getattr(other, name)
            for sym in sorted(mine ^ theirs):
                side = "left" if sym in mine else "right"
                out.append(f"{name}: {sym!r} only in {side} operand")
        return out


@dataclass(frozen=True, order=True)
class VpaTransition:
    source: str
    label: str
    stack: str        # stack symbol, BOTTOM or ANY
    target: str
    kind: Kind

    def __str__(self) -> str:
        return f"{self.source} -{self.label}/{self.stack}-> {self.target}"


@dataclass(frozen=True)
class Configuration:
    state: str
    stack: Tuple[str, ...] = ()  # top first; _BOTTOM_ implicit below

    @property
    def top(self) -> Optional[str]:
        return self.stack[0] if self.stack else None

    def __str__(self) -> str:
        return f"({self.state}, {' '.join(self.stack + ('⊥',))})"


@dataclass(frozen=True)
class Vpa:
    alphabet: PartitionedAlphabet
    states: FrozenSet[str]
    initial: FrozenSet[str]
    stack_alphabet: FrozenSet[str]
    transitions: FrozenSet[VpaTransition]
    finals: FrozenSet[str]

    @cached_property
    def _by_source(self) -> Dict[str, Tuple[VpaTransition, ...]]:
        idx: Dict[str, List[VpaTransition]] = defaultdict(list)
        for t in sorted(self.transitions):
            idx[t.source].append(t)
        return {s: tuple(ts) for s, ts in idx.items()}

    def outgoing(self, state: str) -> Tuple[VpaTransition, ...]:
        return self._by_source.get(state, ())

    def with_changes(self, **changes) -> "Vpa":
        return replace(self, **changes)


TransitionLike = Union[VpaTransition, Tuple[str, str, str, str], Tuple[str, str, str, str, Kind]]


def infer_kind(alphabet: PartitionedAlphabet, label: str, stack: str) -> Kind:
    if label == EPSILON:
        return Kind.EPSILON
    if label == TAU:
        return Kind.INTERNAL
    kind = alphabet.kind_of(label)
    if kind is not None:
        return kind
    # unknown label: keep the stack shape so validate can report it
    if stack == BOTTOM:
        return Kind.POP
    if stack == ANY:
        return Kind.SIMPLE
    return Kind.PUSH


def as_transition(alphabet: PartitionedAlphabet, t: TransitionLike) -> VpaTransition:
    if isinstance(t, VpaTransition):
        return t
    if len(t) == 5:
        src, label, stack, dst, kind = t  # type: ignore[misc]
        return VpaTransition(src, label, stack, dst, Kind(kind))
    src, label, stack, dst = t  # type: ignore[misc]
    return VpaTransition(src, label, stack, dst, infer_kind(alphabet, label, stack))


def make_vpa(
    alphabet: PartitionedAlphabet,
    states: Iterable[str],
    initial: Iterable[str],
    stack: Iterable[str],
    transitions: Iterable[TransitionLike],
    finals: Iterable[str],
) -> Vpa:
    return Vpa(
        alphabet=alphabet,
        states=frozenset(states),
        initial=frozenset(initial),
        stack_alphabet=frozenset(stack),
        transitions=frozenset(as_transition(alphabet, t) for t in transitions),
        finals=frozenset(finals),
    )


# ----------------------------
# Validation
# ----------------------------
def transition_violations(
    t: VpaTransition,
    alphabet: PartitionedAlphabet,
    stack_alphabet: FrozenSet[str],
    states: FrozenSet[str],
    allowed: Sequence[Kind],
) -> List[str]:
    out: List[str] = []
    where = f"transition {t}"
    for end, sid in (("source", t.source), ("target", t.target)):
        if sid not in states:
            out.append(f"{where}: unknown {end} state {sid!r}")
    if t.kind not in allowed:
        out.append(f"{where}: kind {t.kind.value} not allowed here")
        return out
    if t.kind is Kind.PUSH:
        if t.label not in alphabet.calls:
            out.append(f"{where}: push label {t.label!r} is not a call symbol")
        if t.stack not in stack_alphabet:
            out.append(f"{where}: push symbol {t.stack!r} not in stack alphabet")
    elif t.kind is Kind.POP:
        if t.label not in alphabet.returns:
            out.append(f"{where}: pop label {t.label!r} is not a return symbol")
        if t.stack != BOTTOM and t.stack not in stack_alphabet:
            out.append(f"{where}: pop symbol {t.stack!r} not in stack alphabet")
    elif t.kind is Kind.SIMPLE:
        if t.label not in alphabet.internals:
            out.append(f"{where}: simple label {t.label!r} is not an internal symbol")
        if t.stack != ANY:
            out.append(f"{where}: simple move must use {ANY}")
    elif t.kind is Kind.EPSILON:
        if t.label != EPSILON or t.stack != ANY:
            out.append(f"{where}: epsilon move must be {EPSILON}/{ANY}")
    elif t.kind is Kind.INTERNAL:
        if t.label != TAU or t.stack != ANY:
            out.append(f"{where}: internal move must be {TAU}/{ANY}")
    return out


def structure_violations(alphabet: PartitionedAlphabet, states, initial, stack_alphabet, finals) -> List[str]:
    out = list(alphabet.violations())
    for z in sorted(stack_alphabet & RESERVED):
        out.append(f"stack alphabet: reserved symbol {z!r}")
    for s in sorted(initial - states):
        out.append(f"initial: unknown state {s!r}")
    for s in sorted(finals - states):
        out.append(f"finals: unknown state {s!r}")
    return out


def validate(a: Vpa) -> List[str]:
    out = structure_violations(a.alphabet, a.states, a.initial, a.stack_alphabet, a.finals)
    allowed = (Kind.PUSH, Kind.POP, Kind.SIMPLE, Kind.EPSILON)
    for t in sorted(a.transitions):
        out.extend(transition_violations(t, a.alphabet, a.stack_alphabet, a.states, allowed))
    return out


# ----------------------------
# Moves
# ----------------------------
def enabled(t: VpaTransition, c: Configuration) -> bool:
    if t.source != c.state:
        return False
    if t.kind is not Kind.POP:
        return True
    if t.stack == BOTTOM:
        return not c.stack
    return c.top == t.stack


def apply_move(t: VpaTransition, c: Configuration) -> Configuration:
    if t.kind is Kind.PUSH:
        return Configuration(t.target, (t.stack,) + c.stack)
    if t.kind is Kind.POP and t.stack != BOTTOM:
        return Configuration(t.target, c.stack[1:])
    return Configuration(t.target, c.stack)


def step(a: Vpa, c: Configuration, t: VpaTransition) -> Configuration:
    if t not in a.transitions:
        raise StepRejected("unknown-transition", f"{t} is not a transition of this automaton")
    if t.source != c.state:
        raise StepRejected("source", f"{t} does not leave state {c.state!r}")
    if t.kind is Kind.POP:
        if t.stack == BOTTOM and c.stack:
            raise StepRejected("empty-stack", f"{t} needs an empty stack, top is {c.top!r}")
        if t.stack != BOTTOM and c.top != t.stack:
            raise StepRejected("stack-top", f"{t} needs top {t.stack!r}, top is {c.top!r}")
    return apply_move(t, c)


def silent_closure(
    a: Vpa,
    configs: Iterable[Configuration],
    memo: Optional[Dict[Configuration, FrozenSet[Configuration]]] = None,
) -> FrozenSet[Configuration]:
    """Configurations reachable through silent moves (ε, or ς for induced machines)."""
    out: Set[Configuration] = set()
    for c in configs:
        if memo is not None and c in memo:
            out |= memo[c]
            continue
        seen = {c}
        queue = deque([c])
        while queue:
            cur = queue.popleft()
            for t in a.outgoing(cur.state):
                if t.kind in (Kind.EPSILON, Kind.INTERNAL):
                    nxt = apply_move(t, cur)
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
        closed = frozenset(seen)
        if memo is not None:
            memo[c] = closed
        out |= closed
    return frozenset(out)


def successors(a: Vpa, c: Configuration, symbol: str) -> List[Configuration]:
    return [apply_move(t, c) for t in a.outgoing(c.state) if t.label == symbol and enabled(t, c)]


def check_word(alphabet: PartitionedAlphabet, word: Sequence[str]) -> None:
    known = set(alphabet.symbols)
    for sym in word:
        if sym not in known:
            raise InputSymbolError(sym)


def configurations_after(a: Vpa, word: Sequence[str]) -> FrozenSet[Configuration]:
    check_word(a.alphabet, word)
    memo: Dict[Configuration, FrozenSet[Configuration]] = {}
    current = silent_closure(a, (Configuration(s) for s in a.initial), memo)
    for sym in word:
        nxt: Set[Configuration] = set()
        for c in current:
            nxt.update(successors(a, c, sym))
        if not nxt:
            return frozenset()
        current = silent_closure(a, nxt, memo)
    return current


def accepts(a: Vpa, word: Sequence[str]) -> bool:
    return any(c.state in a.finals for c in configurations_after(a, word))


def run_of(a: Vpa, word: Sequence[str]) -> List[Tuple[Optional[VpaTransition], Configuration]]:
    """
    One run over `word` as (transition, configuration) pairs, first entry is the start.
    Exact for deterministic automata; otherwise the first enabled move in sorted order.
    Stops early when the run blocks.
    """
    check_word(a.alphabet, word)
    if not a.initial:
        return []
    c = Configuration(min(a.initial))
    run: List[Tuple[Optional[VpaTransition], Configuration]] = [(None, c)]
    for sym in word:
        seen = {c}
        while True:
            moves = [t for t in a.outgoing(c.state) if t.label == sym and enabled(t, c)]
            if moves:
                c = apply_move(moves[0], c)
                run.append((moves[0], c))
                break
            silent = [t for t in a.outgoing(c.state) if t.kind in (Kind.EPSILON, Kind.INTERNAL)]
            if not silent or apply_move(silent[0], c) in seen:
                return run
            c = apply_move(silent[0], c)
            seen.add(c)
            run.append((silent[0], c))
    return run


# ----------------------------
# Determinism
# ----------------------------
@dataclass(frozen=True)
class DeterminismCheck:
    ok: bool
    condition: str = ""                                  # "initial" | "1" | "2" | "3"
    witness: Tuple[VpaTransition, ...] = field(default=())
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_deterministic(a: Vpa) -> DeterminismCheck:
    if len(a.initial) > 1:
        return DeterminismCheck(False, "initial", (), f"{len(a.initial)} initial states")

    for s in sorted(a.states | {t.source for t in a.transitions}):
        outs = a.outgoing(s)
        silent = [t for t in outs if t.kind is Kind.EPSILON]
        labelled = [t for t in outs if t.kind is not Kind.EPSILON]
        if silent and labelled:
            return DeterminismCheck(False, "3", (silent[0], labelled[0]),
                                    f"state {s!r} has both an epsilon move and a labelled move")

    pushes: Dict[Tuple[str, str], List[VpaTransition]] = defaultdict(list)
    others: Dict[Tuple[str, str, str], List[VpaTransition]] = defaultdict(list)
    for t in sorted(a.transitions):
        if t.kind is Kind.PUSH:
            pushes[(t.source, t.label)].append(t)
        else:
            others[(t.source, t.label, t.stack)].append(t)

    for (s, label), ts in sorted(pushes.items()):
        if len(ts) > 1:
            return DeterminismCheck(False, "1", (ts[0], ts[1]),
                                    f"state {s!r} has two pushes on {label!r}")
    for (s, label, z), ts in sorted(others.items()):
        if len(ts) > 1:
            return DeterminismCheck(False, "2", (ts[0], ts[1]),
                                    f"state {s!r} has two moves on {label!r}/{z!r}")
    return DeterminismCheck(True)


# ----------------------------
# Epsilon elimination
# ----------------------------
def _epsilon_graph(a: Vpa) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(a.states)
    g.add_edges_from((t.source, t.target) for t in a.transitions if t.kind is Kind.EPSILON)
    return g


def epsilon_closure(a: Vpa, state: str) -> FrozenSet[str]:
    g = _epsilon_graph(a)
    if state not in g:
        return frozenset({state})
    return frozenset({state} | nx.descendants(g, state))


def collapse_epsilon_cycles(a: Vpa, exitless_only: bool = False) -> Vpa:
    """
    Merge every cyclic ε-SCC into its least member. Language preserving.
    With exitless_only, only components no ε-move leaves are merged.
    """
    g = _epsilon_graph(a)
    rep_of: Dict[str, str] = {}
    for comp in sorted(nx.strongly_connected_components(g), key=min):
        rep = min(comp)
        if len(comp) == 1 and not g.has_edge(rep, rep):
            continue
        if exitless_only and any(v not in comp for u in comp for v in g.successors(u)):
            continue
        for s in comp:
            rep_of[s] = rep
        logger.debug("epsilon cycle %s collapsed into %s", sorted(comp), rep)
    if not rep_of:
        return a

    def m(s: str) -> str:
        return rep_of.get(s, s)

    moves = set()
    for t in a.transitions:
        if t.kind is Kind.EPSILON and t.source in rep_of and m(t.source) == m(t.target):
            continue
        moves.add(replace(t, source=m(t.source), target=m(t.target)))
    return a.with_changes(
        states=frozenset(m(s) for s in a.states),
        initial=frozenset(m(s) for s in a.initial),
        finals=frozenset(m(s) for s in a.finals),
        transitions=frozenset(moves),
    )


def remove_epsilon_moves(a: Vpa) -> Vpa:
    if not any(t.kind is Kind.EPSILON for t in a.transitions):
        return a
    g = _epsilon_graph(a)
    closure = {s: frozenset({s} | nx.descendants(g, s)) for s in a.states}

    moves = {t for t in a.transitions if t.kind is not Kind.EPSILON}
    for r in a.states:
        for s in closure[r]:
            for t in a.outgoing(s):
                if t.kind is Kind.EPSILON:
                    continue
                for p in closure.get(t.target, frozenset({t.target})):
                    moves.add(VpaTransition(r, t.label, t.stack, p, t.kind))

    initial = frozenset().union(*(closure.get(s, frozenset({s})) for s in a.initial)) if a.initial else frozenset()
    logger.debug("remove_epsilon_moves: %d -> %d transitions", len(a.transitions), len(moves))
    return a.with_changes(initial=initial, transitions=frozenset(moves))


def remove_epsilon_moves_deterministic(a: Vpa) -> Vpa:
    check = is_deterministic(a)
    if not check:
        raise ContractError(f"automaton is not deterministic (condition {check.condition}: {check.message})")
    if not any(t.kind is Kind.EPSILON for t in a.transitions):
        return a

    # 1) collapse epsilon cycles into their least member
    b = collapse_epsilon_cycles(a)
    states = set(b.states)
    initial = set(b.initial)
    finals = set(b.finals)
    moves = set(b.transitions)

    # 2) splice the remaining (acyclic) epsilon moves, innermost first
    while True:
        silent = sorted(t for t in moves if t.kind is Kind.EPSILON)
        if not silent:
            break
        sources = {t.source for t in silent}
        t = next(u for u in silent if u.target not in sources)
        moves.discard(t)
        for u in [u for u in moves if u.source == t.target]:
            moves.add(VpaTransition(t.source, u.label, u.stack, u.target, u.kind))
        if t.source in initial and t.source not in finals:
            initial = {t.target}
        if t.target in finals:
            finals.add(t.source)

    return a.with_changes(
        states=frozenset(states),
        initial=frozenset(initial),
        finals=frozenset(finals),
        transitions=frozenset(moves),
    )
