"""Exception taxonomy shared across the package.

Three broad groups, mirrored by the CLI exit codes: problems with input
data or shapes (``DataError``, exit 3), numerical blow-ups during
training (``DivergenceError``, exit 4), and everything argparse-shaped
(exit 2, raised as ``UsageError`` or by argparse itself).
"""


class WavecastError(Exception):
    """Base class for everything raised deliberately by this package."""


class DataError(WavecastError):
    """Input data violates a documented precondition."""


class UsageError(WavecastError):
    """Bad invocation: unknown config key, malformed override, ..."""


class DivergenceError(WavecastError):
    """Training produced non-finite numbers."""


# -- time series ingestion / preparation ------------------------------

class IoError(DataError):
    pass


class MissingColumn(DataError):
    pass


class NonMonotonicTime(DataError):
    pass


class OffGridTime(DataError):
    """Timestamp not on the inferred uniform grid."""


class BadValue(DataError):
    """Unparseable value cell; message names the offending row."""


class EmptySeries(DataError):
    pass


class ConstantSeries(DataError):
    pass


class StepTooLarge(DataError):
    pass


# -- wavelet filter banks ----------------------------------------------

class UnknownFamily(DataError):
    pass


class TooShort(DataError):
    pass


class BadLevels(DataError):
    pass


class InconsistentPyramid(DataError):
    pass


class UnknownBand(DataError):
    pass


# -- lifting ------------------------------------------------------------

class EmptyInput(DataError):
    pass


class LengthMismatch(DataError):
    pass


class StageMismatch(DataError):
    pass


class RankDeficient(DataError):
    pass


class InfeasibleConstraints(DataError):
    pass


class SingularStage(DataError):
    """Update-first stage whose P or U operator cannot be inverted."""


# -- recurrent net / training --------------------------------------------

class NonFiniteActivation(DivergenceError):
    pass


class Diverged(DivergenceError):
    pass


# -- pipeline assembly ----------------------------------------------------

class HorizonTooShort(DataError):
    pass


class MisalignedSeries(DataError):
    pass


class InsufficientHistory(DataError):
    pass


class ConstantActual(DataError):
    pass
