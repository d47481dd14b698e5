"""Exception types raised by the audit pipeline."""


class AuditError(Exception):
    """Base class for all input/usage errors raised by this package."""


class EmptyDocument(AuditError):
    """A policy document is empty after whitespace trimming."""


class ParseError(AuditError):
    """A line-oriented data file is malformed."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class LabelError(ParseError):
    """A corpus line carries an unknown label token."""


class FoldError(AuditError):
    """Cross-validation fold constraints cannot be met."""


class DegenerateTraining(AuditError):
    """Training data contains only one class."""


class ShapeError(AuditError):
    """Vector/label dimensions do not line up."""


class RuleParseError(AuditError):
    """A proximity rule string violates the rule grammar."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"position {position}: {message}"
        super().__init__(message)
        self.position = position


class DomainError(AuditError):
    """A fully-qualified domain name cannot be parsed."""
