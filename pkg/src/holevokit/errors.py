"""Exception types raised by the toolkit.

Every exception carries a stable ``code`` string (used by the CLI error
object) and an optional ``context`` mapping with machine-readable details.
"""


class HolevoError(ValueError):
    code = "Error"

    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context


class NotSquare(HolevoError):
    code = "NotSquare"


class NotHermitian(HolevoError):
    code = "NotHermitian"


class NotNormal(HolevoError):
    code = "NotNormal"


class NotProjection(HolevoError):
    code = "NotProjection"


class NotCommuting(HolevoError):
    code = "NotCommuting"


class DimensionMismatch(HolevoError):
    code = "DimensionMismatch"


class WrongDimension(HolevoError):
    code = "WrongDimension"


class InvalidState(HolevoError):
    code = "InvalidState"


class InvalidPVM(HolevoError):
    code = "InvalidPVM"


class NotIndiscernible(HolevoError):
    code = "NotIndiscernible"


class SpectralAmbiguity(HolevoError):
    code = "SpectralAmbiguity"


class NotInAlgebra(HolevoError):
    code = "NotInAlgebra"


class IndexMismatch(HolevoError):
    code = "IndexMismatch"


class OutOfRange(HolevoError):
    code = "OutOfRange"


class BadAxes(HolevoError):
    code = "BadAxes"


class BadCells(HolevoError):
    code = "BadCells"


class GridMismatch(HolevoError):
    code = "GridMismatch"


class NotTabular(HolevoError):
    code = "NotTabular"


class UnknownCommand(HolevoError):
    code = "UnknownCommand"


class BadInput(HolevoError):
    code = "BadInput"
