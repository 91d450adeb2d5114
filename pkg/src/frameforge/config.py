"""Process-wide limits.

The CLI overrides these from flags; library callers can use :func:`override`
as a context manager.
"""

from contextlib import contextmanager
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Limits:
    max_atoms: int = 10
    eval_budget: int = 2**26
    sample_count: int = 10**6
    clone_cap: int = 2**20
    star_retries: int = 10_000
    bell_max_atoms: int = 9
    canon_max_atoms: int = 8
    oracle_max_atoms: int = 3


_current = Limits()


def limits() -> Limits:
    return _current


@contextmanager
def override(**changes):
    global _current
    saved = _current
    _current = replace(_current, **{k: v for k, v in changes.items() if v is not None})
    try:
        yield _current
    finally:
        _current = saved
