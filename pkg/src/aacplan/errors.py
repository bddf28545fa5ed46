"""Exception hierarchy shared by every aacplan module."""


class AACError(Exception):
    """Base class for all domain errors raised by aacplan."""


class UnknownTrait(AACError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unknown trait {self.name!r}"


class DuplicateName(AACError):
    pass


class InvalidDescriptor(AACError):
    pass


class InvalidAccuracy(AACError, ValueError):
    pass


class InvalidTransformation(AACError, ValueError):
    pass


class InvalidTopk(AACError, ValueError):
    pass


class InvalidProfile(AACError, ValueError):
    pass


class NoChannel(AACError):
    pass


class InvalidObjective(AACError, ValueError):
    pass


class UnknownStage(AACError, KeyError):
    pass


class UnknownMember(AACError, KeyError):
    pass


class SelfRoute(AACError):
    pass


class UnknownEstimate(AACError, KeyError):
    pass


class InsufficientData(AACError):
    pass


class Uncoverable(AACError):
    def __init__(self, row):
        super().__init__(f"row {row!r} has no recommended technology")
        self.row = row


class TooLarge(AACError):
    pass


class InvalidPipeline(AACError, ValueError):
    pass


class ParseError(AACError):
    """Scenario text could not be read as a document."""

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line
        self.message = message


class ValidationError(AACError):
    """Scenario parsed but violates the schema or a cross-reference."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message
