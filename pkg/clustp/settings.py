from __future__ import annotations

import os
import sys
import time
from pathlib import Path
from typing import Optional

from clustp.errors import ConfigError

# ---------------------- dotenv (optional) ----------------------
try:
    from dotenv import load_dotenv  # type: ignore
    load_dotenv()
except Exception:
    pass

BASE_DIR = Path(__file__).resolve().parent.parent


def _env_flag(name: str, default: str = "0") -> bool:
    return os.getenv(name, default).strip().lower() in {"1", "true", "yes", "on"}


def _env_number(name: str, default: str, cast=int):
    raw = os.getenv(name, default).strip()
    try:
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"{name}={raw!r} is not a valid {cast.__name__}") from exc


VERBOSE = _env_flag("CLUSTP_VERBOSE", "0")
DEFAULT_GAMMA = _env_number("CLUSTP_DEFAULT_GAMMA", "50", float)
DEFAULT_RUNS = _env_number("CLUSTP_DEFAULT_RUNS", "30", int)
PRECOMPUTE_LIMIT = _env_number("CLUSTP_PRECOMPUTE_LIMIT", str(10**7), int)
DATA_DIR = Path(os.getenv("CLUSTP_DATA_DIR") or BASE_DIR / "data")


def set_verbose(enabled: bool) -> None:
    global VERBOSE
    VERBOSE = bool(enabled)


def worker_count(override: Optional[int] = None) -> int:
    """Worker cap: explicit override, then CLUSTP_THREADS, then the CPU count."""
    if override is not None:
        count = override
    else:
        raw = os.getenv("CLUSTP_THREADS", "").strip()
        if raw:
            try:
                count = int(raw)
            except ValueError as exc:
                raise ConfigError(f"CLUSTP_THREADS={raw!r} is not an integer") from exc
        else:
            count = os.cpu_count() or 1
    if count < 1:
        raise ConfigError(f"worker count must be >= 1 (got {count})")
    return count


def log(msg: str) -> None:
    if VERBOSE:
        ts = time.strftime("%H:%M:%S")
        print(f"[{ts}] {msg}", file=sys.stderr)
