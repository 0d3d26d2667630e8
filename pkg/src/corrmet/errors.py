"""Exception types shared across the package."""


class CorrmetError(Exception):
    """Base class for all package-specific errors."""


class DataError(CorrmetError):
    """Invalid data or configuration: bad CSV cells, single-class labels,
    unknown metric names, degenerate experiment inputs.

    The CLI maps this class to exit code 2.
    """
