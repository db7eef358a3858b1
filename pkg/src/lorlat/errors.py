"""Exception hierarchy.

Input/validation problems and exhausted search budgets are reported through
dedicated classes so the CLI can map them to exit codes; internal invariant
violations signal bugs, not bad input.
"""


class LorlatError(Exception):
    """Base class for all package errors."""


class InputError(LorlatError):
    """Bad user input (malformed file, invalid lattice, bad arguments)."""


class MalformedDocument(InputError):
    pass


class DuplicateId(InputError):
    pass


class UnknownIdInPair(InputError):
    pass


class NotAPartialOrder(InputError):
    pass


class NotAJoinSemilattice(InputError):
    def __init__(self, a: str, b: str, reason: str = "no least upper bound"):
        self.pair = (a, b)
        super().__init__(f"pair ({a!r}, {b!r}): {reason}")


class OutOfDomain(InputError):
    pass


class VectorTooLong(InputError):
    pass


class EmptySubset(InputError):
    pass


class NoQualifyingRounds(InputError):
    pass


class InsufficientRounds(InputError):
    def __init__(self, v: int, rounds: int):
        self.v = v
        self.rounds = rounds
        super().__init__(
            f"universe member {v} is never selected within {rounds} rounds; rerun with more rounds"
        )


class SearchBudgetExceeded(LorlatError):
    """Halving search exhausted its budget; the requested parameters look infeasible."""


class StepLimitExceeded(LorlatError):
    """Mass-extension loop hit its step limit before reaching the target."""


class ThresholdNotMet(LorlatError):
    """An incomparability ratio stayed below the requested threshold; rerun with more rounds."""

    def __init__(self, pair, achieved, threshold, report=None):
        self.pair = pair
        self.achieved = achieved
        self.threshold = threshold
        self.report = report  # the full verdict report, still writable by callers
        super().__init__(
            f"pair {pair}: max ratio {achieved} < threshold {threshold}; rerun with more rounds"
        )


class EmptyIntersectionFamily(LorlatError):
    """The representation recursion found no strict upper bounds; input is corrupt."""


class InternalInvariantFailure(LorlatError):
    """A structural guarantee failed; this signals a bug, not bad input."""
