class BoundaryError(Exception):
    """Base class for errors raised by the boundary-estimation stack."""


class InvalidInstance(BoundaryError, ValueError):
    """Problem parameters are out of range or Hölder membership can't be certified."""


class BudgetExhausted(BoundaryError, RuntimeError):
    """The label oracle has spent its hard cap; stop the current depth/epoch."""

    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"label budget exhausted (cap={cap})")
