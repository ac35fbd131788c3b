#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
errors.py

Exception types raised by the automaton modules.
Validation results stay plain lists of strings; these are for hard failures.
"""

from __future__ import annotations

from typing import Optional, Sequence


class VpaError(ValueError):
    """Base class for domain failures (maps to CLI exit code 2)."""


class StepRejected(VpaError):
    def __init__(self, clause: str, message: str):
        super().__init__(f"step rejected ({clause}): {message}")
        self.clause = clause  # "source" | "stack-top" | "empty-stack" | "unknown-transition"


class InputSymbolError(VpaError):
    def __init__(self, symbol: str):
        super().__init__(f"symbol not in alphabet: {symbol!r}")
        self.symbol = symbol


class ContractError(VpaError):
    def __init__(self, message: str, operand: Optional[str] = None):
        prefix = f"{operand}: " if operand else ""
        super().__init__(prefix + message)
        self.operand = operand


class DocumentError(VpaError):
    def __init__(self, source: str, locus: str, message: str, violations: Sequence[str] = ()):
        super().__init__(f"{source}: {locus}: {message}")
        self.source = source
        self.locus = locus
        self.violations = list(violations)
