"""Exception hierarchy shared by the mixedwalk modules."""


class MixedWalkError(Exception):
    """Base class for every error raised by this package."""


class InputError(MixedWalkError):
    """Bad user input: malformed graphs, parameters or angles."""


class ImplementationMismatch(MixedWalkError):
    """Two independent computations of the same quantity disagree."""
