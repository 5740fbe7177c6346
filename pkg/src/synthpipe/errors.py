"""Exception hierarchy shared across the package."""


class SynthPipeError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SynthPipeError):
    """Input data or parameters violate a documented invariant."""


class ClaimsParseError(SynthPipeError):
    """A claims table row could not be parsed."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ParseError(SynthPipeError):
    """Structured agent output (scenario, note, transcript) failed to parse."""

    def __init__(self, message: str, missing: tuple[str, ...] = ()):
        if missing:
            message = f"{message}: {', '.join(missing)}"
        super().__init__(message)
        self.missing = missing


class TransportError(SynthPipeError):
    """Retries exhausted against a backend without a usable response."""


class ProtocolError(SynthPipeError):
    """The endpoint answered with a non-retryable error."""

    def __init__(self, message: str, status: int | None = None, body: str = ""):
        super().__init__(message)
        self.status = status
        self.body = body


class ScriptExhaustedError(AssertionError, SynthPipeError):
    """A scripted backend received a request after its script ran out."""


class GenerationError(SynthPipeError):
    """An agent produced no usable output within the allowed re-asks."""


class JudgingError(SynthPipeError):
    """The scenario judge's verdict could not be parsed after a re-ask."""


class UnresolvedCaseError(SynthPipeError):
    """Every juror abstained on a comparison case."""
