"""Exception types raised by the package."""


class XslLabError(Exception):
    """Base class for all errors raised by this package."""


class PairFormatError(XslLabError):
    """A corpus stream violates the pairs-text or jsonl format."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyCorpusError(XslLabError):
    """A corpus source contained no usable records."""


class MissingLexiconEntryError(XslLabError):
    """A word was looked up in a lexicon that has no entry for it."""


class CorpusSpecError(XslLabError):
    """A synthetic corpus specification is internally inconsistent."""


class TrialConstructionError(XslLabError):
    """Probe trials could not be built from the available context pairs."""

    def __init__(self, message: str, found: int = 0):
        self.found = found
        super().__init__(message)


class ReferentCapacityError(XslLabError):
    """The learner observed more referents than its configured capacity."""


class GoldMissingError(XslLabError):
    """A word was scored against a gold lexicon that does not contain it."""


class EvaluationError(XslLabError):
    """An evaluation was requested on a state with nothing to evaluate."""


class DegenerateRowError(XslLabError):
    """A batch maximization step saw a word with zero total expected count."""


class ConfigError(XslLabError):
    """An experiment configuration file or value is invalid."""
