"""Exception hierarchy shared by all modules."""


class NormsurfError(Exception):
    """Base class for every error raised by this package."""


class NotSymmetric(NormsurfError, ValueError):
    pass


class SingularSystem(NormsurfError, ValueError):
    """A linear system had no unique solution.

    ``kernel`` holds a nonzero rational vector ``v`` with ``m @ v == 0``.
    """

    def __init__(self, message, kernel):
        super().__init__(message)
        self.kernel = tuple(kernel)


class ParseError(NormsurfError, ValueError):
    """Malformed model or divisor document.

    ``field`` is a dotted path into the document (``singular_points[0].id``)
    and ``line`` the 1-based source line when the JSON itself is broken.
    """

    def __init__(self, message, field=None, line=None):
        where = []
        if field is not None:
            where.append(f"field {field!r}")
        if line is not None:
            where.append(f"line {line}")
        text = f"{message} ({', '.join(where)})" if where else message
        super().__init__(text)
        self.field = field
        self.line = line


class InvalidModel(NormsurfError, ValueError):
    """Raised when an operation receives a model whose validation failed."""

    def __init__(self, report):
        codes = ", ".join(issue.code for issue in report.errors)
        super().__init__(f"invalid surface model: {codes}")
        self.report = report


class UnknownDivisor(NormsurfError, KeyError):
    def __str__(self):
        return f"unknown prime divisor {self.args[0]!r}"


class PreconditionError(NormsurfError, ValueError):
    pass


class NoWitness(NormsurfError, ValueError):
    pass


class NoSeed(NormsurfError, ValueError):
    pass


class NoDecomposition(NormsurfError, ValueError):
    pass
