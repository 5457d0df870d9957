"""Deterministic derivation of independent RNG seeds.

Every stage of a run draws from its own stream, keyed by the master seed
plus a label path.  Adding a new stage (or model family) therefore never
perturbs the draws of existing stages.
"""

from __future__ import annotations

import hashlib


def derive_seed(*parts: int | str) -> int:
    """Map a label path to a stable 64-bit seed.

    Uses SHA-256 rather than ``hash()`` so results do not depend on
    PYTHONHASHSEED or the interpreter version.
    """
    digest = hashlib.sha256(repr(parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")
