"""Exception hierarchy for hypersplit.

All library errors derive from :class:`HypersplitError` so callers (the CLI in
particular) can map whole families of failures onto exit codes.
"""


class HypersplitError(Exception):
    """Base class for every error raised by this package."""


class ModelError(HypersplitError):
    """A fault model violates a structural invariant."""


class UnknownFaultError(ModelError, KeyError):
    """A fault configuration refers to a fault id the model does not have."""

    def __str__(self) -> str:
        return Exception.__str__(self)


class ProbabilityRangeError(ModelError, ValueError):
    """A probability falls outside (0, 0.5]."""


class ParseError(ModelError):
    """The fault-model text could not be parsed.

    ``line`` is the 1-based line number of the offending line, or ``None``
    when the problem concerns the file as a whole (e.g. a missing header).
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotGraphLikeError(ModelError):
    """A fault triggers three or more checks where a graph is required."""

    def __init__(self, fault_id: int, weight: int):
        self.fault_id = fault_id
        self.weight = weight
        super().__init__(
            f"fault {fault_id} triggers {weight} checks; a decoding graph "
            "needs every fault to trigger one or two")


class NoPathError(HypersplitError):
    """Two vertices live in different connected components."""


class MatchingInfeasibleError(HypersplitError):
    """No perfect matching exists for the given instance."""


class OddComponentError(HypersplitError):
    """A component has odd syndrome parity but no boundary edge to absorb it."""

    def __init__(self, component: int):
        self.component = component
        super().__init__(
            f"component {component} holds an odd number of syndrome checks "
            "and has no boundary edge")


class UnsplittableFaultError(HypersplitError):
    """Raised in strict splitting mode when some fault cannot be split."""

    def __init__(self, fault_ids: list[int]):
        self.fault_ids = list(fault_ids)
        super().__init__(f"{len(self.fault_ids)} unsplittable fault(s): "
                         f"{self.fault_ids[:10]}")


class SearchBoundError(HypersplitError):
    """An exhaustive enumeration would exceed the configuration guard."""


class SplitFailure(HypersplitError):
    """A single fault could not be decomposed; ``reason`` says why."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class ParameterError(HypersplitError, ValueError):
    """A generator or harness parameter is out of its allowed range."""
