"""Exception types shared across the package."""


class SizeMismatchError(ValueError):
    """A grid function does not match the grid's collocation count."""


class InvalidCutoffError(ValueError):
    """A spectral projection cutoff exceeds the Nyquist range."""


class UndefinedRadiusError(ValueError):
    """The analyticity-radius fit band contains too few usable coefficients."""


class InvalidContourError(ValueError):
    """A lifted contour violates positivity or derivative consistency."""


class DegenerateGeometryError(RuntimeError):
    """The chord-arc ratio fell below the configured floor.

    Attributes:
        pair: index pair (i, j) realizing the offending ratio, or None.
        ratio: the offending chord-arc ratio.
    """

    def __init__(self, message, pair=None, ratio=None):
        super().__init__(message)
        self.pair = pair
        self.ratio = ratio


class DegenerateParametrizationError(RuntimeError):
    """The tangent norm of an interface parametrization vanishes."""


class ScheduleDomainError(ValueError):
    """A height-schedule evaluator was called outside its time domain."""


class InvalidFamilyError(ValueError):
    """Turnover-family parameters violate the sign conditions at the origin."""


class BlowupError(RuntimeError):
    """Non-finite coefficients appeared during time integration."""


class ConfigError(ValueError):
    """A scenario configuration failed to parse or validate."""


class SnapshotError(ValueError):
    """A snapshot file is corrupt, truncated, or has the wrong version."""
