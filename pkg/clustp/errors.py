from __future__ import annotations

from typing import Optional


class ClustpError(Exception):
    exit_code = 2


class UsageError(ClustpError):
    exit_code = 1


class DataError(ClustpError, ValueError):
    """Malformed input: bad files, invalid instances, invalid parameters."""

    exit_code = 2


class InfeasibleError(ClustpError, RuntimeError):
    """The input is well formed but no (checkable) solution exists."""

    exit_code = 3


class ConfigError(DataError):
    pass


# ---------------------- instance validation ----------------------
class OverlappingClustersError(DataError):
    pass


class UncoveredVertexError(DataError):
    pass


class EmptyClusterError(DataError):
    pass


class SourceOutOfRangeError(DataError):
    pass


class AsymmetricMatrixError(DataError):
    pass


class NegativeWeightError(DataError):
    pass


class NonzeroDiagonalError(DataError):
    pass


class WeightSpecError(DataError):
    pass


class SameVertexError(DataError):
    pass


class OutOfRangeError(DataError):
    pass


# ---------------------- shortest-path trees ----------------------
class DisconnectedInducedSubgraphError(DataError):
    pass


class RootNotMemberError(DataError):
    pass


# ---------------------- heuristic ----------------------
class InfiniteWeightError(DataError):
    pass


class EmptyCandidateSetError(DataError):
    pass


class NonpositiveRewardError(DataError):
    pass


class DisconnectedClustersError(InfeasibleError):
    pass


# ---------------------- evaluation / oracle ----------------------
class InfeasibleTreeError(InfeasibleError):
    pass


class InstanceTooLargeError(InfeasibleError):
    pass


class NoFeasibleTreeError(InfeasibleError):
    pass


# ---------------------- files ----------------------
class ParseError(DataError):
    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class MissingSectionError(DataError):
    def __init__(self, section: str) -> None:
        self.section = section
        super().__init__(f"missing section {section}")


# ---------------------- generators / bench ----------------------
class UnableToPopulateCellsError(DataError):
    pass


class NonpositiveReferenceError(DataError):
    pass
