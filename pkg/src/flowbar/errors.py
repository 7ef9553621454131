"""Exception types shared across the package."""


class FlowbarError(Exception):
    """Base class for all package errors."""


class TranscriptParseError(FlowbarError):
    """Malformed transcript input. Carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyTranscriptError(FlowbarError):
    """Input contained no usable text."""


class LexiconError(FlowbarError):
    """Invalid lexicon file. Carries the offending record's line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"record at line {line}: {message}"
        super().__init__(message)


class ConflictError(FlowbarError):
    """A record with the same id already exists."""


class NotFoundError(FlowbarError):
    """Lookup of an unknown id."""


class EventSchemaError(FlowbarError):
    """An interaction event failed schema validation. Names the bad field."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(message)


class EventValidationError(FlowbarError):
    """A session's event log is inconsistent. Carries all problems found."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class AnnotationServiceError(FlowbarError):
    """Remote annotation endpoint answered with a non-2xx status."""

    def __init__(self, message: str, status: int | None = None):
        self.status = status
        super().__init__(message)


class RetriableAnnotationError(FlowbarError):
    """Transport-level failure talking to the remote annotator; safe to retry."""


class AnnotationDecodeError(FlowbarError):
    """Remote annotator returned a payload we could not interpret."""


class ConfigError(FlowbarError):
    """Invalid configuration (CLI flags, profile files, ...)."""
