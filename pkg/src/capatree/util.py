"""Small shared helpers."""

from __future__ import annotations

import os


def worker_count() -> int:
    """Worker pool size for batch runs; the CAPATREE_THREADS env var caps it.

    Defaults to 1 (serial) so results are reproducible without opt-in.
    """
    raw = os.environ.get("CAPATREE_THREADS")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
