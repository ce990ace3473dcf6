from __future__ import annotations

from typing import Any, NamedTuple


class Verdict(NamedTuple):
    """Boolean outcome of a check plus the first counterexample found (or None)."""

    ok: bool
    witness: Any = None

    def __bool__(self) -> bool:
        return self.ok
