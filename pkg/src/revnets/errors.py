"""Exception hierarchy shared across the package."""


class RevnetsError(Exception):
    """Base class for all package errors."""


class OffParseError(RevnetsError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MeshValidationError(RevnetsError, ValueError):
    """A mesh invariant does not hold; ``invariant`` names which one."""

    def __init__(self, invariant, message):
        self.invariant = invariant
        super().__init__(f"{invariant}: {message}")


class DegeneratePolygonError(RevnetsError, ValueError):
    pass


class NonConvexError(RevnetsError, ValueError):
    pass


class SearchBudgetExceeded(RevnetsError, RuntimeError):
    pass


class GeodesicError(RevnetsError, ValueError):
    pass


class TreeError(RevnetsError, ValueError):
    pass


class CrossingTreesError(RevnetsError, ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"dissection trees properly cross: {witness}")


class RoutingError(RevnetsError, RuntimeError):
    pass


class UnfoldError(RevnetsError, ValueError):
    pass


class ChainError(RevnetsError, ValueError):
    pass


class TilingError(RevnetsError, ValueError):
    pass


class WindowTooLargeError(TilingError):
    def __init__(self, required_radius, message):
        self.required_radius = required_radius
        super().__init__(message)
