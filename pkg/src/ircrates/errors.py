"""Error types shared across the protocol modules.

Infeasibility (a parameter choice no code can satisfy, e.g. zero relay power
share for a compression stream) is deliberately distinct from invalid input:
parameter sweeps legitimately hit infeasible cells and must be able to skip
them, while invalid input is a caller bug and raises ValueError.
"""


class InfeasibleError(Exception):
    """The requested operating point admits no finite-rate solution."""


class ConstraintViolationError(ValueError):
    """A supplied parameter violates a protocol constraint.

    The message names the violated bound so sweep drivers and the CLI can
    report which constraint failed.
    """

    def __init__(self, bound_name: str, value: float, bound: float):
        self.bound_name = bound_name
        self.value = value
        self.bound = bound
        super().__init__(
            f"{bound_name}: got {value!r}, requires >= {bound!r}"
        )
