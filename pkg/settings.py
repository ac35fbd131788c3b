#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
settings.py

Runtime configuration read from the environment (.env supported).

Optional env:
  VPCONF_ORACLE_LEN=6        # default bound for enumerate / check cross-check
  VPCONF_LOG_LEVEL=WARNING   # DEBUG | INFO | WARNING | ERROR
"""

from __future__ import annotations

import os
from typing import Optional

from dotenv import load_dotenv

# ----------------------------
# .env load
# ----------------------------
load_dotenv(override=False)

# ----------------------------
# Config (defaults)
# ----------------------------
ORACLE_LEN_ENV = "VPCONF_ORACLE_LEN"
LOG_LEVEL_ENV = "VPCONF_LOG_LEVEL"

DEFAULT_ORACLE_LEN = 6
DEFAULT_LOG_LEVEL = "WARNING"

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def env(name: str, default: Optional[str] = None) -> Optional[str]:
    v = os.getenv(name, "").strip()
    if not v:
        return default
    return v


def oracle_len() -> int:
    raw = env(ORACLE_LEN_ENV)
    if raw is None:
        return DEFAULT_ORACLE_LEN
    try:
        n = int(raw)
    except ValueError:
        n = -1
    if n < 0:
        raise RuntimeError(f"Invalid env var {ORACLE_LEN_ENV}: {raw!r} (expected integer >= 0)")
    return n


def log_level() -> str:
    raw = (env(LOG_LEVEL_ENV, DEFAULT_LOG_LEVEL) or DEFAULT_LOG_LEVEL).upper()
    if raw not in LOG_LEVELS:
        raise RuntimeError(f"Invalid env var {LOG_LEVEL_ENV}: {raw!r} (expected one of {', '.join(LOG_LEVELS)})")
    return raw
