"""Exception hierarchy shared by every module."""


class HoroError(Exception):
    """Base class for all library errors."""


class InvalidSpec(HoroError):
    pass


class MixedGroups(HoroError):
    pass


class IdentityGenerator(HoroError):
    pass


class MemoryBudgetExceeded(HoroError):
    pass


class OutOfBall(HoroError):
    pass


class HorizonTooSmall(HoroError):
    pass


class NotAGeodesic(HoroError):
    pass


class RayTooShort(HoroError):
    pass


class UncertifiedLimit(HoroError):
    pass


class RadiusMismatch(HoroError):
    pass


class DomainTooSmall(HoroError):
    pass


class NoFiniteOrbit(HoroError):
    pass


class PreconditionFailed(HoroError):
    pass


class OutOfDomain(HoroError):
    pass


class InvalidGraph(HoroError):
    pass


class ConfigError(HoroError):
    pass
