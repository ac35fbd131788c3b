#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
oracle.py

Brute-force enumerators used as ground truth by the property suites and by
`check`'s bounded cross-check. Shares no move code with vpa_core / vpts_core:
configurations are plain (state, stack-tuple) pairs here.
"""

from __future__ import annotations

import itertools
import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Set, Tuple

from vpa_core import ANY, BOTTOM, EPSILON, TAU, Kind, PartitionedAlphabet, Vpa, VpaTransition, Word
from vpts_core import AnyVpts, TraceGrammar, vpts_of

logger = logging.getLogger(__name__)

Config = Tuple[str, Tuple[str, ...]]


def word_order(w: Word) -> Tuple[int, Word]:
    return (len(w), w)


@dataclass(frozen=True)
class BoundedLanguage:
    words: FrozenSet[Word]
    bound: int
    source: str = ""

    def __contains__(self, w) -> bool:
        return tuple(w) in self.words

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[Word]:
        return iter(sorted(self.words, key=word_order))

    def union(self, other: "BoundedLanguage") -> "BoundedLanguage":
        return BoundedLanguage(self.words | other.words, min(self.bound, other.bound), f"{self.source}|{other.source}")

    def intersection(self, other: "BoundedLanguage") -> "BoundedLanguage":
        return BoundedLanguage(self.words & other.words, min(self.bound, other.bound), f"{self.source}&{other.source}")

    def difference(self, other: "BoundedLanguage") -> "BoundedLanguage":
        return BoundedLanguage(self.words - other.words, min(self.bound, other.bound), f"{self.source}-{other.source}")


# ----------------------------
# Raw moves
# ----------------------------
def _index(transitions: Iterable[VpaTransition]) -> Dict[str, List[VpaTransition]]:
    idx: Dict[str, List[VpaTransition]] = defaultdict(list)
    for t in transitions:
        idx[t.source].append(t)
    return idx


def _fire(t: VpaTransition, cfg: Config) -> List[Config]:
    state, stack = cfg
    if t.source != state:
        return []
    if t.label in (EPSILON, TAU) or t.stack == ANY:
        return [(t.target, stack)]
    if t.stack == BOTTOM:
        return [(t.target, stack)] if not stack else []
    if t.kind is Kind.PUSH:
        return [(t.target, (t.stack,) + stack)]
    if stack and stack[0] == t.stack:
        return [(t.target, stack[1:])]
    return []


def _closure(idx: Dict[str, List[VpaTransition]], cfgs: Iterable[Config], memo: Dict[Config, FrozenSet[Config]]) -> FrozenSet[Config]:
    out: Set[Config] = set()
    for cfg in cfgs:
        if cfg not in memo:
            seen = {cfg}
            queue = deque([cfg])
            while queue:
                cur = queue.popleft()
                for t in idx.get(cur[0], ()):
                    if t.label in (EPSILON, TAU):
                        for nxt in _fire(t, cur):
                            if nxt not in seen:
                                seen.add(nxt)
                                queue.append(nxt)
            memo[cfg] = frozenset(seen)
        out |= memo[cfg]
    return frozenset(out)


def _explore(
    transitions: Iterable[VpaTransition],
    initial: Iterable[str],
    symbols: Tuple[str, ...],
    accepting: Callable[[FrozenSet[Config]], bool],
    max_len: int,
) -> FrozenSet[Word]:
    if max_len < 0:
        raise ValueError(f"max_len must be >= 0, got {max_len}")
    idx = _index(transitions)
    memo: Dict[Config, FrozenSet[Config]] = {}
    start = _closure(idx, [(s, ()) for s in initial], memo)
    if not start:
        return frozenset()
    frontier: Dict[Word, FrozenSet[Config]] = {(): start}
    out: Set[Word] = {()} if accepting(start) else set()
    for _ in range(max_len):
        nxt: Dict[Word, FrozenSet[Config]] = {}
        for word, cfgs in frontier.items():
            for sym in symbols:
                moved = [n for cfg in cfgs for t in idx.get(cfg[0], ()) if t.label == sym for n in _fire(t, cfg)]
                if not moved:
                    continue
                closed = _closure(idx, moved, memo)
                nxt[word + (sym,)] = closed
                if accepting(closed):
                    out.add(word + (sym,))
        frontier = nxt
    return frozenset(out)


# ----------------------------
# Enumerators
# ----------------------------
def enumerate_vpa(a: Vpa, max_len: int, source: str = "") -> BoundedLanguage:
    finals = a.finals
    words = _explore(
        a.transitions, a.initial, a.alphabet.symbols,
        lambda cfgs: any(state in finals for state, _ in cfgs),
        max_len,
    )
    logger.debug("enumerate_vpa: %d words up to length %d", len(words), max_len)
    return BoundedLanguage(words, max_len, source)


def enumerate_otr(v: AnyVpts, max_len: int, source: str = "") -> BoundedLanguage:
    base = vpts_of(v)
    words = _explore(base.transitions, base.initial, base.alphabet.symbols, bool, max_len)
    return BoundedLanguage(words, max_len, source)


def sigma_star(alphabet: PartitionedAlphabet, max_len: int) -> BoundedLanguage:
    words = set()
    for n in range(max_len + 1):
        words.update(itertools.product(alphabet.symbols, repeat=n))
    return BoundedLanguage(frozenset(words), max_len, "sigma*")


def enumerate_transition_traces(v: AnyVpts, max_len: int) -> FrozenSet[Tuple[VpaTransition, ...]]:
    """Transition sequences (internal moves included) fired from an initial configuration."""
    base = vpts_of(v)
    idx = _index(base.transitions)
    out: Set[Tuple[VpaTransition, ...]] = set()
    layer = {((), (s, ())) for s in base.initial}
    for depth in range(max_len + 1):
        out.update(seq for seq, _ in layer)
        if depth == max_len:
            break
        nxt = set()
        for seq, cfg in layer:
            for t in idx.get(cfg[0], ()):
                for n in _fire(t, cfg):
                    nxt.add((seq + (t,), n))
        layer = nxt
    return frozenset(out)


def enumerate_derivation_prefixes(g: TraceGrammar, max_len: int) -> FrozenSet[Tuple[VpaTransition, ...]]:
    """Terminal prefixes of leftmost sentential forms with at most max_len terminals."""
    out: Set[Tuple[VpaTransition, ...]] = set()
    layer = {((), (s,)) for s in g.starts}
    for depth in range(max_len + 1):
        out.update(prefix for prefix, _ in layer)
        if depth == max_len:
            break
        nxt = set()
        for prefix, rest in layer:
            if not rest:
                continue
            for p in g.by_lhs.get(rest[0], ()):
                nxt.add((prefix + (p.terminal,), p.rhs + rest[1:]))
        layer = nxt
    return frozenset(out)
