"""Exception hierarchy shared by all modules."""


class VlabError(Exception):
    """Base class for every error raised by vinolab."""


class InvalidArgument(VlabError, ValueError):
    pass


class OutOfRange(VlabError, ValueError):
    """A query went past the limit of a precomputed table."""


class ResourceLimit(VlabError, RuntimeError):
    """A request would exceed the configured memory budget."""


class Unsupported(VlabError, ValueError):
    pass


class ValidityError(VlabError, ValueError):
    """Inputs lie outside the range where an asymptotic formula is meaningful."""
