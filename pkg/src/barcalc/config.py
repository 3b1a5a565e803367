"""Resource caps."""

import os
from contextlib import contextmanager

from .errors import InvalidInput, ResourceBudgetExceeded

DEFAULT_CAP = 2**22


def simplex_cap() -> int:
    """Largest number of simplices (or basis vectors) enumerated per level.

    Read from the ``BARCALC_CAP`` environment variable on every call.
    """
    raw = os.environ.get("BARCALC_CAP")
    if raw is None or raw == "":
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InvalidInput(f"BARCALC_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise InvalidInput("BARCALC_CAP must be positive")
    return cap


def check_cap(what: str, needed: int) -> None:
    cap = simplex_cap()
    if needed > cap:
        raise ResourceBudgetExceeded(what, needed, cap)


@contextmanager
def cap_override(cap: int):
    """Temporarily set the simplex cap (restores the previous environment on exit)."""
    old = os.environ.get("BARCALC_CAP")
    os.environ["BARCALC_CAP"] = str(int(cap))
    try:
        yield
    finally:
        if old is None:
            os.environ.pop("BARCALC_CAP", None)
        else:
            os.environ["BARCALC_CAP"] = old
