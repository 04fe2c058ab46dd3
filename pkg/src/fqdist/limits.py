"""Scan-size budgeting for the exhaustive enumerations used everywhere else.

Every full scan in the package (q^d vector sweeps, q^{2d} Fourier tables,
|A||B| pair scans, |E|^3 triple scans) is gated by a single configurable
ceiling so a typo'd dimension fails fast instead of allocating forever.
"""

import os

DEFAULT_MAX_UNIVERSE = 10_000_000

ENV_VAR = "FQDIST_MAX_UNIVERSE"


class UniverseLimitError(ValueError):
    """An enumeration would exceed the configured scan ceiling."""


def max_universe(override=None) -> int:
    """Current scan ceiling: explicit override, else $FQDIST_MAX_UNIVERSE, else default."""
    if override is not None:
        return int(override)
    env = os.environ.get(ENV_VAR)
    if env is not None:
        return int(env)
    return DEFAULT_MAX_UNIVERSE


def check_budget(n: int, what: str, override=None) -> int:
    limit = max_universe(override)
    if n > limit:
        raise UniverseLimitError(
            f"{what} requires scanning {n} items, over the ceiling {limit} "
            f"(set {ENV_VAR} to raise it)"
        )
    return n
