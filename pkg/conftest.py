# -*- coding: utf-8 -*-

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import pytest

from automaton_io import load_document
from vpa_core import Configuration, PartitionedAlphabet, silent_closure, successors

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"

AB = PartitionedAlphabet.of(calls=["a"], returns=["b"])
ABX = PartitionedAlphabet.of(calls=["a"], returns=["b", "x"])
ABC = PartitionedAlphabet.of(calls=["a"], returns=["b"], internals=["c"])


def fixture_path(name: str) -> str:
    return str(FIXTURES / f"{name}.json")


def golden(name: str) -> str:
    return (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")


# golden outputs assume the default bounds
for _name in ("VPCONF_ORACLE_LEN", "VPCONF_LOG_LEVEL"):
    os.environ.pop(_name, None)


@pytest.fixture
def load():
    return lambda name: load_document(fixture_path(name))


@pytest.fixture
def anbn(load):
    return load("anbn")


@pytest.fixture
def anbn_sf(load):
    return load("anbn_final_sf")


@pytest.fixture
def drinks(load):
    return load("drinks")


@pytest.fixture
def counter_spec(load):
    return load("counter_spec")


@pytest.fixture
def counter_iut(load):
    return load("counter_iut")


@pytest.fixture
def iut_iso(load):
    return load("iut_isomorphic")


@pytest.fixture
def desired(load):
    return load("desired_abx")


@pytest.fixture
def forbidden(load):
    return load("forbidden_anbn1")


@pytest.fixture
def forbidden_apx(load):
    return load("forbidden_apx")


def rngs(seed: int, count: int):
    """count independent generators derived from one seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def runs_from(a, c, word):
    """Configurations reachable from c by reading word."""
    cur = silent_closure(a, [c])
    for sym in word:
        cur = silent_closure(a, [n for x in cur for n in successors(a, x, sym)])
    return cur


def random_triple(rng, a, max_word=5, max_stack=3):
    def pick(items):
        return items[int(rng.integers(len(items)))]

    states, stack, symbols = sorted(a.states), sorted(a.stack_alphabet), sorted(a.alphabet.symbols)
    depth = int(rng.integers(max_stack + 1)) if stack else 0
    c = Configuration(pick(states), tuple(pick(stack) for _ in range(depth)))
    word = tuple(pick(symbols) for _ in range(int(rng.integers(max_word + 1))))
    return c, word


def assert_non_blocking(a, rng, count=100):
    for _ in range(count):
        c, word = random_triple(rng, a)
        assert runs_from(a, c, word), (c, word)
