"""Exception hierarchy shared by all modules."""


class SelfSimError(Exception):
    """Base class for every error raised by this package."""


class ResourceLimit(SelfSimError):
    """A configured state/level/size budget was exceeded."""


class LevelTooLarge(ResourceLimit):
    pass


# -- tree automorphisms -------------------------------------------------------

class ArityMismatch(SelfSimError, ValueError):
    pass


class BadVertex(SelfSimError, ValueError):
    pass


class UnknownGenerator(SelfSimError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown generator"


class MalformedWord(SelfSimError, ValueError):
    pass


# -- .grp files ----------------------------------------------------------------

class SpecError(SelfSimError, ValueError):
    """Problem in a group definition; carries an optional source position."""

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(str(self))

    def __str__(self):
        if self.line is None:
            return self.message
        return f"line {self.line}, column {self.col}: {self.message}"


class GrpSyntaxError(SpecError):
    pass


class ArityError(SpecError):
    pass


class DuplicateGenerator(SpecError):
    pass


class UnknownName(SpecError):
    pass


# -- portraits -----------------------------------------------------------------

class PortraitError(SelfSimError, ValueError):
    pass


class MissingInfinity(PortraitError):
    pass


class RamificationBudgetViolated(PortraitError):
    pass


class UnreachableCycle(PortraitError):
    pass


class BadLocalDegree(PortraitError):
    pass


class NotQuadratic(PortraitError):
    pass


class PlacementInvalid(PortraitError):
    pass


class KneadingValidationFailed(SelfSimError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


# -- quotients and witnesses ---------------------------------------------------

class BadPoint(SelfSimError, ValueError):
    pass


class NotAMember(SelfSimError, ValueError):
    pass


class NoSuchOrbit(SelfSimError):
    pass


class OrderMismatch(SelfSimError, ValueError):
    pass
