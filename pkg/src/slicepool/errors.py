"""Exception hierarchy shared by the index, the cost model and the CLI."""


class SlicePoolError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(SlicePoolError, ValueError):
    """A pool configuration is malformed or cannot be addressed in 32 bits."""


class CapacityError(SlicePoolError):
    """A fixed-width field ran out of room."""


class AddressSpaceExhausted(CapacityError):
    pass


class SegmentFull(CapacityError):
    pass


class PositionOverflow(CapacityError):
    pass


class InvalidAddress(SlicePoolError, LookupError):
    """Read of the NULL sentinel or of a slot that was never allocated."""


class DataFormatError(SlicePoolError, ValueError):
    def __init__(self, message, path=None, lineno=None):
        self.path = path
        self.lineno = lineno
        where = ""
        if path is not None:
            where = f"{path}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)
