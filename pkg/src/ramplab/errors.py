"""Exception and warning types raised across ramplab."""


class RampLabError(Exception):
    """Base class for every error raised by the library."""


class DataError(RampLabError):
    """Input data (curves, trajectories, files) is unusable."""


class TooFewPoints(DataError):
    pass


class DegenerateSegment(DataError):
    pass


class ArcLengthFidelity(DataError):
    pass


class IndexOutOfRange(RampLabError, IndexError):
    pass


class OriginHasNoAngle(RampLabError, ValueError):
    pass


class NonpositiveRadius(RampLabError, ValueError):
    pass


class AtOrigin(RampLabError, ValueError):
    pass


class CurveThroughOrigin(DataError):
    pass


class NoBracket(RampLabError):
    pass


class NonpositiveScale(RampLabError, ValueError):
    pass


class CrossesVerticalAxis(DataError):
    pass


class NotATreadmillSled(DataError):
    pass


class OriginSingular(RampLabError, ValueError):
    pass


class VEqualsOne(RampLabError, ValueError):
    pass


class PhiOutOfDomain(RampLabError, ValueError):
    pass


class TOutOfDomain(RampLabError, ValueError):
    pass


class UOutOfRange(RampLabError, ValueError):
    pass


class StepIntoSingularity(RampLabError):
    pass


class SpecParseError(RampLabError, ValueError):
    """A force or family spec string could not be parsed."""


class MixedAdmissibility(UserWarning):
    """The admissibility sign changes along a curve (reported, not fatal)."""


class UsageError(RampLabError):
    """Bad command-line usage (exit status 2)."""


class UnknownVerb(UsageError):
    pass


class MissingFlag(UsageError):
    pass


class BadNumber(UsageError):
    pass
