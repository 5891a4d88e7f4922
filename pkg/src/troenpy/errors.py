"""Exception hierarchy shared by all modules."""


class TroenpyError(Exception):
    """Base class for every error raised by this package."""


class DomainError(TroenpyError, ValueError):
    """A value lies outside the mathematical domain of an operation."""


class IngestionError(TroenpyError):
    """A corpus file is missing or a record cannot be parsed."""


class SchemaError(IngestionError):
    """A record parses but lacks a required field."""


class SplitError(TroenpyError, ValueError):
    pass


class ConfigError(TroenpyError, ValueError):
    pass


class ShapeError(TroenpyError, ValueError):
    pass


class DivergenceError(TroenpyError, ArithmeticError):
    """Training produced a non-finite objective."""


class UndefinedReductionError(TroenpyError, ZeroDivisionError):
    pass


class VocabularyError(TroenpyError, KeyError):
    """A term is not in the fitted vocabulary."""
