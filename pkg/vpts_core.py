#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
vpts_core.py

[Goal]
- VPTS / IOVPTS models (no final states, internal action _TAU_ instead of _EPS_)
- observable traces (internal moves erased)
- trace grammar: nonterminals [s,Z,p], leftmost derivations <-> traces
- contract(): keep only pop transitions some trace can actually fire
- induced conversions VPTS <-> VPA

The grammar helpers (productive / leftmost / shortest yields / leftmost distances)
are shared with the emptiness search in conformance.py.
"""

from __future__ import annotations

import heapq
import itertools
import logging
from collections import defaultdict, deque
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from errors import ContractError
from vpa_core import (
    ANY,
    BOTTOM,
    EPSILON,
    TAU,
    Configuration,
    Kind,
    PartitionedAlphabet,
    TransitionLike,
    Vpa,
    VpaTransition,
    Word,
    apply_move,
    as_transition,
    enabled,
    is_deterministic,
    silent_closure,
    structure_violations,
    successors,
    transition_violations,
)

logger = logging.getLogger(__name__)

VPTS_KINDS = (Kind.PUSH, Kind.POP, Kind.SIMPLE, Kind.INTERNAL)


# ----------------------------
# Models
# ----------------------------
@dataclass(frozen=True)
class Vpts:
    alphabet: PartitionedAlphabet
    states: FrozenSet[str]
    initial: FrozenSet[str]
    stack_alphabet: FrozenSet[str]
    transitions: FrozenSet[VpaTransition]

    @cached_property
    def _by_source(self) -> Dict[str, Tuple[VpaTransition, ...]]:
        idx: Dict[str, List[VpaTransition]] = defaultdict(list)
        for t in sorted(self.transitions):
            idx[t.source].append(t)
        return {s: tuple(ts) for s, ts in idx.items()}

    def outgoing(self, state: str) -> Tuple[VpaTransition, ...]:
        return self._by_source.get(state, ())

    def with_changes(self, **changes) -> "Vpts":
        return replace(self, **changes)


@dataclass(frozen=True)
class Iovpts:
    underlying: Vpts
    inputs: FrozenSet[str]
    outputs: FrozenSet[str]

    @property
    def alphabet(self) -> PartitionedAlphabet:
        return self.underlying.alphabet

    def is_input(self, symbol: str) -> bool:
        return symbol in self.inputs

    def is_output(self, symbol: str) -> bool:
        return symbol in self.outputs


AnyVpts = Union[Vpts, Iovpts]


def vpts_of(x: AnyVpts) -> Vpts:
    return x.underlying if isinstance(x, Iovpts) else x


def make_vpts(
    alphabet: PartitionedAlphabet,
    states: Iterable[str],
    initial: Iterable[str],
    stack: Iterable[str],
    transitions: Iterable[TransitionLike],
) -> Vpts:
    return Vpts(
        alphabet=alphabet,
        states=frozenset(states),
        initial=frozenset(initial),
        stack_alphabet=frozenset(stack),
        transitions=frozenset(as_transition(alphabet, t) for t in transitions),
    )


def make_iovpts(
    alphabet: PartitionedAlphabet,
    states: Iterable[str],
    initial: Iterable[str],
    stack: Iterable[str],
    transitions: Iterable[TransitionLike],
    inputs: Iterable[str],
    outputs: Iterable[str],
) -> Iovpts:
    return Iovpts(make_vpts(alphabet, states, initial, stack, transitions), frozenset(inputs), frozenset(outputs))


# ----------------------------
# Validation
# ----------------------------
def _unreached_states(v: Vpts) -> Set[str]:
    """Configuration sweep with stack depth capped at |states|*|stack|+1."""
    pending = set(v.states) - set(v.initial)
    if not pending:
        return pending
    depth = len(v.states) * len(v.stack_alphabet) + 1
    start = [Configuration(s) for s in sorted(v.initial)]
    visited = set(start)
    queue = deque(start)
    while queue and pending:
        c = queue.popleft()
        for t in v.outgoing(c.state):
            if not enabled(t, c):
                continue
            nxt = apply_move(t, c)
            if len(nxt.stack) > depth or nxt in visited:
                continue
            visited.add(nxt)
            pending.discard(nxt.state)
            queue.append(nxt)
    return pending


def validate_vpts(v: Vpts) -> List[str]:
    out = structure_violations(v.alphabet, v.states, v.initial, v.stack_alphabet, frozenset())
    for t in sorted(v.transitions):
        out.extend(transition_violations(t, v.alphabet, v.stack_alphabet, v.states, VPTS_KINDS))
        if t.kind is Kind.INTERNAL and t.source == t.target:
            out.append(f"transition {t}: internal self-loop")
    if out:
        return out
    for s in sorted(_unreached_states(v)):
        out.append(f"state {s!r}: not reachable from an initial configuration")
    return out


def validate_iovpts(x: Iovpts) -> List[str]:
    out = validate_vpts(x.underlying)
    for sym in sorted(x.inputs & x.outputs):
        out.append(f"io: symbol {sym!r} is both input and output")
    declared = x.inputs | x.outputs
    symbols = set(x.alphabet.symbols)
    for sym in sorted(symbols - declared):
        out.append(f"io: symbol {sym!r} is neither input nor output")
    for sym in sorted(declared - symbols):
        out.append(f"io: symbol {sym!r} is not in the alphabet")
    return out


# ----------------------------
# Induced machines
# ----------------------------
def induced_vpa(v: AnyVpts) -> Vpa:
    v = vpts_of(v)
    moves = frozenset(
        VpaTransition(t.source, EPSILON, ANY, t.target, Kind.EPSILON) if t.kind is Kind.INTERNAL else t
        for t in v.transitions
    )
    return Vpa(
        alphabet=v.alphabet,
        states=v.states,
        initial=v.initial,
        stack_alphabet=v.stack_alphabet,
        transitions=moves,
        finals=v.states,
    )


def induced_vpts(a: Vpa) -> Vpts:
    if a.finals != a.states:
        raise ContractError("induced VPTS defined only when all states are final")
    moves = set()
    for t in a.transitions:
        if t.kind is Kind.EPSILON:
            if t.source == t.target:
                continue  # would be an internal self-loop
            moves.add(VpaTransition(t.source, TAU, ANY, t.target, Kind.INTERNAL))
        else:
            moves.add(t)
    return Vpts(
        alphabet=a.alphabet,
        states=a.states,
        initial=a.initial,
        stack_alphabet=a.stack_alphabet,
        transitions=frozenset(moves),
    )


# ----------------------------
# Semantics
# ----------------------------
def observable_traces(v: AnyVpts, max_len: int) -> FrozenSet[Word]:
    if max_len < 0:
        raise ValueError(f"max_len must be >= 0, got {max_len}")
    a = induced_vpa(v)
    if not a.initial:
        return frozenset()
    memo: Dict[Configuration, FrozenSet[Configuration]] = {}
    frontier: Dict[Word, FrozenSet[Configuration]] = {
        (): silent_closure(a, (Configuration(s) for s in a.initial), memo)
    }
    out: Set[Word] = {()}
    for _ in range(max_len):
        nxt: Dict[Word, FrozenSet[Configuration]] = {}
        for word, configs in frontier.items():
            for sym in a.alphabet.symbols:
                succ: Set[Configuration] = set()
                for c in configs:
                    succ.update(successors(a, c, sym))
                if succ:
                    nxt[word + (sym,)] = silent_closure(a, succ, memo)
        out.update(nxt)
        frontier = nxt
    return frozenset(out)


def is_deterministic_vpts(v: AnyVpts) -> bool:
    v = vpts_of(v)
    if len(v.initial) > 1:
        return False
    if any(t.kind is Kind.INTERNAL for t in v.transitions):
        return False
    return bool(is_deterministic(induced_vpa(v)))


# ----------------------------
# Trace grammar
# ----------------------------
@dataclass(frozen=True)
class GrammarNonterminal:
    state: str
    stack: str                    # stack symbol or BOTTOM
    continuation: Optional[str]   # None <=> stack == BOTTOM

    def __str__(self) -> str:
        return f"[{self.state},{self.stack},{self.continuation if self.continuation is not None else '-'}]"


@dataclass(frozen=True)
class Production:
    lhs: GrammarNonterminal
    terminal: VpaTransition
    rhs: Tuple[GrammarNonterminal, ...]

    def __str__(self) -> str:
        return f"{self.lhs} -> {self.terminal} {' '.join(str(n) for n in self.rhs)}".rstrip()


@dataclass(frozen=True)
class TraceGrammar:
    starts: Tuple[GrammarNonterminal, ...]   # I -> [s0,_BOTTOM_,-]
    nonterminals: FrozenSet[GrammarNonterminal]
    productions: Tuple[Production, ...]

    @cached_property
    def by_lhs(self) -> Dict[GrammarNonterminal, Tuple[Production, ...]]:
        idx: Dict[GrammarNonterminal, List[Production]] = defaultdict(list)
        for p in self.productions:
            idx[p.lhs].append(p)
        return {k: tuple(v) for k, v in idx.items()}


def _build_grammar(
    states: FrozenSet[str],
    initial: FrozenSet[str],
    outgoing: Callable[[str], Sequence[VpaTransition]],
    prune_continuations: bool = False,
) -> TraceGrammar:
    """
    Push rule  [x] -> t [t.target, Z, r] [r, x.stack, x.continuation]  for every state r.
    With prune_continuations, r ranges only over targets of pops on Z (one
    placeholder when Z is never popped): [q,Z,r] can only be closed by such a
    pop, so the language and the leftmost analyses stay the same.
    """
    every_state = sorted(states)
    pop_targets: Dict[str, Set[str]] = defaultdict(set)
    for s in states:
        for t in outgoing(s):
            if t.kind is Kind.POP and t.stack != BOTTOM:
                pop_targets[t.stack].add(t.target)
    placeholder = every_state[:1]

    def continuations(z: str) -> List[str]:
        if not prune_continuations:
            return every_state
        return sorted(pop_targets[z]) if z in pop_targets else placeholder

    starts = tuple(GrammarNonterminal(s, BOTTOM, None) for s in sorted(initial))
    seen: Set[GrammarNonterminal] = set(starts)
    queue = deque(starts)
    productions: List[Production] = []

    def visit(n: GrammarNonterminal) -> GrammarNonterminal:
        if n not in seen:
            seen.add(n)
            queue.append(n)
        return n

    while queue:
        x = queue.popleft()
        for t in outgoing(x.state):
            if t.kind is Kind.PUSH:
                for r in continuations(t.stack):
                    y1 = visit(GrammarNonterminal(t.target, t.stack, r))
                    y2 = visit(GrammarNonterminal(r, x.stack, x.continuation))
                    productions.append(Production(x, t, (y1, y2)))
            elif t.kind is Kind.POP:
                if x.stack != BOTTOM:
                    if t.stack == x.stack and t.target == x.continuation:
                        productions.append(Production(x, t, ()))
                elif t.stack == BOTTOM:
                    y = visit(GrammarNonterminal(t.target, BOTTOM, None))
                    productions.append(Production(x, t, (y,)))
            else:
                y = visit(GrammarNonterminal(t.target, x.stack, x.continuation))
                productions.append(Production(x, t, (y,)))

    logger.debug("trace grammar: %d nonterminals, %d productions", len(seen), len(productions))
    return TraceGrammar(starts=starts, nonterminals=frozenset(seen), productions=tuple(productions))


def build_trace_grammar(v: AnyVpts) -> TraceGrammar:
    v = vpts_of(v)
    return _build_grammar(v.states, v.initial, v.outgoing)


def grammar_for_vpa(a: Vpa) -> TraceGrammar:
    """Same construction over a VPA, with pruned continuations; epsilon moves play the internal-action role."""
    return _build_grammar(a.states, a.initial, a.outgoing, prune_continuations=True)


def terminal_word(t: VpaTransition) -> Word:
    return () if t.label in (EPSILON, TAU) else (t.label,)


def productive_nonterminals(g: TraceGrammar) -> FrozenSet[GrammarNonterminal]:
    """Backward fixed point: nonterminals deriving at least one terminal string."""
    pending = [len(p.rhs) for p in g.productions]
    users: Dict[GrammarNonterminal, List[int]] = defaultdict(list)
    for i, p in enumerate(g.productions):
        for n in p.rhs:
            users[n].append(i)
    productive: Set[GrammarNonterminal] = set()
    queue = deque(p.lhs for p in g.productions if not p.rhs)
    while queue:
        n = queue.popleft()
        if n in productive:
            continue
        productive.add(n)
        for i in users[n]:
            pending[i] -= 1
            if pending[i] == 0:
                queue.append(g.productions[i].lhs)
    return frozenset(productive)


def leftmost_nonterminals(
    g: TraceGrammar,
    productive: Optional[FrozenSet[GrammarNonterminal]] = None,
) -> FrozenSet[GrammarNonterminal]:
    """Forward fixed point: nonterminals that show up leftmost in some sentential form."""
    if productive is None:
        productive = productive_nonterminals(g)
    found: Set[GrammarNonterminal] = set(g.starts)
    queue = deque(g.starts)
    while queue:
        x = queue.popleft()
        for p in g.by_lhs.get(x, ()):
            nxt = []
            if p.rhs:
                nxt.append(p.rhs[0])
            if len(p.rhs) == 2 and p.rhs[0] in productive:
                nxt.append(p.rhs[1])
            for n in nxt:
                if n not in found:
                    found.add(n)
                    queue.append(n)
    return frozenset(found)


def shortest_yields(g: TraceGrammar) -> Dict[GrammarNonterminal, Word]:
    """
    c(X): shortest (then lexicographically least) terminal word derivable from X.
    Least-cost-first over productions, a production fires once all its
    right-hand nonterminals are settled.
    """
    counter = itertools.count()
    pending = [len(p.rhs) for p in g.productions]
    users: Dict[GrammarNonterminal, List[int]] = defaultdict(list)
    heap: List[tuple] = []
    for i, p in enumerate(g.productions):
        for n in p.rhs:
            users[n].append(i)
        if not p.rhs:
            w = terminal_word(p.terminal)
            heapq.heappush(heap, (len(w), w, next(counter), p.lhs))

    best: Dict[GrammarNonterminal, Word] = {}
    while heap:
        _, w, _, n = heapq.heappop(heap)
        if n in best:
            continue
        best[n] = w
        for i in users[n]:
            pending[i] -= 1
            if pending[i] == 0:
                p = g.productions[i]
                if p.lhs in best:
                    continue
                cand = terminal_word(p.terminal) + tuple(itertools.chain.from_iterable(best[m] for m in p.rhs))
                heapq.heappush(heap, (len(cand), cand, next(counter), p.lhs))
    return best


def leftmost_distances(
    g: TraceGrammar,
    yields: Optional[Dict[GrammarNonterminal, Word]] = None,
) -> Dict[GrammarNonterminal, Word]:
    """
    d(X): shortest word w such that some leftmost sentential form is w X ...
    (Dijkstra over X -> t Y .. edges, the right sibling costs the left one's yield).
    """
    if yields is None:
        yields = shortest_yields(g)
    counter = itertools.count()
    heap: List[tuple] = [(0, (), next(counter), s) for s in g.starts]
    heapq.heapify(heap)
    dist: Dict[GrammarNonterminal, Word] = {}
    while heap:
        _, w, _, x = heapq.heappop(heap)
        if x in dist:
            continue
        dist[x] = w
        for p in g.by_lhs.get(x, ()):
            if not p.rhs:
                continue
            base = w + terminal_word(p.terminal)
            first = p.rhs[0]
            if first not in dist:
                heapq.heappush(heap, (len(base), base, next(counter), first))
            if len(p.rhs) == 2 and first in yields and p.rhs[1] not in dist:
                cand = base + yields[first]
                heapq.heappush(heap, (len(cand), cand, next(counter), p.rhs[1]))
    return dist


# ----------------------------
# Contraction
# ----------------------------
def _pop_fires(x: GrammarNonterminal, t: VpaTransition) -> bool:
    if x.stack == BOTTOM:
        return t.stack == BOTTOM
    return t.stack == x.stack and t.target == x.continuation


def contract(v: AnyVpts) -> AnyVpts:
    """Keep the transitions a leftmost derivation can use, then drop unreachable states."""
    base = vpts_of(v)
    g = build_trace_grammar(base)
    ln = leftmost_nonterminals(g)

    keep: Set[VpaTransition] = set()
    for x in ln:
        for t in base.outgoing(x.state):
            if t.kind is not Kind.POP or _pop_fires(x, t):
                keep.add(t)

    graph = nx.DiGraph()
    graph.add_nodes_from(base.states)
    graph.add_edges_from((t.source, t.target) for t in keep)
    reach = set(base.initial)
    for s in base.initial:
        reach |= nx.descendants(graph, s)

    moves = frozenset(t for t in keep if t.source in reach)
    dropped = len(base.transitions) - len(moves)
    if dropped:
        logger.debug("contract: dropped %d transitions, %d states", dropped, len(base.states) - len(reach))
    out = base.with_changes(states=frozenset(reach), transitions=moves)
    if isinstance(v, Iovpts):
        return replace(v, underlying=out)
    return out


def pop_witnesses(v: AnyVpts) -> Dict[VpaTransition, Word]:
    """Shortest observable word after which each firable pop transition is enabled."""
    base = vpts_of(v)
    g = build_trace_grammar(base)
    dist = leftmost_distances(g)
    out: Dict[VpaTransition, Word] = {}
    for x in sorted(dist, key=lambda n: (len(dist[n]), dist[n], str(n))):
        for t in base.outgoing(x.state):
            if t.kind is Kind.POP and t not in out and _pop_fires(x, t):
                out[t] = dist[x]
    return out
