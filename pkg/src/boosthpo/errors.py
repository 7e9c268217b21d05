"""Exception hierarchy shared across the library.

The CLI maps these onto exit codes: data problems exit 3, configuration
problems exit 2, everything else that goes wrong at run time exits 4.
"""


class BoostHpoError(Exception):
    """Base class for all library errors."""


# --- data errors -----------------------------------------------------------


class DataError(BoostHpoError):
    """Problems with dataset contents or shapes."""


class EmptyDataset(DataError):
    pass


class MalformedLine(DataError):
    def __init__(self, line_no: int, message: str = ""):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}" if message else f"line {line_no}")


class NonIntegerLabel(DataError):
    pass


class FractionOutOfRange(DataError):
    pass


class BadShape(DataError):
    pass


class NonFiniteMargin(DataError):
    pass


class NonFiniteFeature(DataError):
    pass


class ObjectiveMismatch(DataError):
    pass


class SingleClass(DataError):
    pass


class NotAProbability(DataError):
    pass


class RelevanceOutOfRange(DataError):
    pass


class BadRates(DataError):
    pass


# --- optimizer errors ------------------------------------------------------


class OutOfRange(BoostHpoError):
    """A parameter assignment lies outside its declared space."""


class TooFewTrials(BoostHpoError):
    pass


# --- orchestrator errors ---------------------------------------------------


class OrchestratorError(BoostHpoError):
    pass


class TooManyWorkers(OrchestratorError):
    pass


class StaleEpoch(OrchestratorError):
    pass


class RendezvousTimeout(OrchestratorError):
    pass


class WorkerCrash(OrchestratorError):
    pass


class NoRecords(BoostHpoError):
    pass
